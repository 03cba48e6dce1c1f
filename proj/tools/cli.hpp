// cli.hpp
// Command-line front end. run_cli is the whole program minus process setup so
// tests can drive it with captured streams.

#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace saqkd::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kIo = 3,
};

using Field = std::variant<double, long long, std::string, bool>;
using Record = std::vector<std::pair<std::string, Field>>;

struct Table {
    Record config;
    std::vector<Record> results;
};

// Nine significant digits.
std::string format_number(double v);

std::string to_csv(const Table& t);
std::string to_json(const Table& t);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace saqkd::cli
