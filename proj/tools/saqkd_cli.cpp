// saqkd_cli.cpp

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
    return saqkd::cli::run_cli(argc, argv, std::cout, std::cerr);
}
