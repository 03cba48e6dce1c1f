// cli.cpp

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "saqkd/analysis.hpp"
#include "saqkd/attacks.hpp"
#include "saqkd/channel.hpp"
#include "saqkd/protocol.hpp"

namespace saqkd::cli {

namespace {

struct Options {
    std::vector<double> a;
    double mu_b = kDefaultMuB;
    double alpha = kDefaultAlphaDbPerKm;
    double eta_d = kDefaultEtaD;
    std::vector<double> l;
    double l_min = 0.0;
    double l_max = 150.0;
    double l_step = 0.5;
    std::uint64_t pulses = 1'000'000;
    std::uint64_t seed = 1;
    std::string policy = "optimal";
    std::string attack = "storage";
    std::string format = "csv";
    std::string out_path;
    int grid_a = 11;
    int grid_l = 31;
    double tol_km = 0.05;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check_common(const Options& o) {
    for (double a : o.a)
        if (!(a >= 0.0 && a <= 1.0)) throw UsageError("--a values must be in [0, 1]");
    if (!(o.mu_b > 0.0)) throw UsageError("--mu-b must be > 0");
    if (!(o.alpha >= 0.0)) throw UsageError("--alpha must be >= 0");
    if (!(o.eta_d > 0.0 && o.eta_d <= 1.0)) throw UsageError("--eta-d must be in (0, 1]");
    for (double l : o.l)
        if (!(l >= 0.0)) throw UsageError("--l values must be >= 0");
}

std::vector<double> length_grid(const Options& o) {
    if (!o.l.empty()) return o.l;
    if (!(o.l_min >= 0.0)) throw UsageError("--l-min must be >= 0");
    if (!(o.l_min < o.l_max)) throw UsageError("--l-min must be < --l-max");
    if (!(o.l_step > 0.0)) throw UsageError("--l-step must be > 0");
    const auto steps = static_cast<long long>(std::floor((o.l_max - o.l_min) / o.l_step + 1e-9));
    std::vector<double> grid;
    for (long long i = 0; i <= steps; ++i) grid.push_back(o.l_min + static_cast<double>(i) * o.l_step);
    return grid;
}

double channel_eta(double alpha, double l) {
    const double eta = transmission(alpha, l).eta_rho;
    if (!(eta > 0.0)) throw UsageError("channel transmission underflows at this length");
    return eta;
}

Record base_config(const std::string& command, const Options& o) {
    Record c{{"command", command}, {"mu_b", o.mu_b}, {"alpha_db_per_km", o.alpha}, {"eta_d", o.eta_d}};
    return c;
}

Table cmd_simulate(const Options& o) {
    if (o.a.empty()) throw UsageError("simulate requires --a");
    if (o.pulses < 1) throw UsageError("--pulses must be >= 1");
    const double l = o.l.empty() ? 0.0 : o.l.front();
    Table t;
    t.config = base_config("simulate", o);
    t.config.emplace_back("length_km", l);
    t.config.emplace_back("pulses", static_cast<long long>(o.pulses));
    t.config.emplace_back("seed", static_cast<long long>(o.seed));
    for (std::size_t i = 0; i < o.a.size(); ++i) {
        ProtocolParams p{o.a[i], o.mu_b, o.eta_d, o.alpha, l};
        // Each a value gets its own stream family.
        const SessionStats s = run_session(p, o.pulses, o.seed + 0x9e3779b97f4a7c15ull * i);
        const double n = static_cast<double>(s.pulses_sent);
        const double eta = o.eta_d * transmission(o.alpha, l).eta_rho;
        t.results.push_back({
            {"a", o.a[i]},
            {"length_km", l},
            {"pulses_sent", static_cast<long long>(s.pulses_sent)},
            {"detections", static_cast<long long>(s.detections)},
            {"sifted", static_cast<long long>(s.sifted)},
            {"errors", static_cast<long long>(s.errors)},
            {"sifted_fraction", static_cast<double>(s.sifted) / n},
            {"expected_fraction", (1.0 + o.a[i]) / 4.0 * eta},
            {"qber", s.sifted ? static_cast<double>(s.errors) / static_cast<double>(s.sifted) : 0.0},
        });
    }
    return t;
}

Table cmd_attack_sim(const Options& o) {
    if (o.a.empty()) throw UsageError("attack-sim requires --a");
    if (o.l.empty()) throw UsageError("attack-sim requires --l");
    if (o.pulses < 1) throw UsageError("--pulses must be >= 1");
    const bool storage = o.attack == "storage";
    Table t;
    t.config = base_config("attack-sim", o);
    t.config.emplace_back("attack", o.attack);
    t.config.emplace_back("pulses", static_cast<long long>(o.pulses));
    t.config.emplace_back("seed", static_cast<long long>(o.seed));
    AttackSimOptions sim;
    sim.eta_d = o.eta_d;
    std::uint64_t stream = 0;
    for (double a : o.a) {
        for (double l : o.l) {
            const double eta = channel_eta(o.alpha, l);
            const double mu = mu_for_a(a, o.mu_b);
            const std::uint64_t seed = o.seed + 0x9e3779b97f4a7c15ull * stream++;
            const AttackSimResult r = storage ? monte_carlo_storage(a, eta, mu, o.pulses, seed, sim)
                                              : monte_carlo_irud(a, eta, mu, o.pulses, seed, sim);
            const AttackResult an = storage ? storage_attack(a, eta, mu, o.eta_d) : irud_attack(a, eta, mu, o.eta_d);
            Record rec{
                {"attack", std::string(to_string(r.empirical.attack))},
                {"a", a},
                {"length_km", l},
                {"mu", mu},
                {"q", r.empirical.q},
                {"saturated", r.empirical.saturated},
                {"delivered_rate", r.empirical.delivered_rate},
                {"expected_rate", o.eta_d * eta * mu},
                {"rate_sigma", r.rate_sigma},
                {"eve_info", r.empirical.eve_info},
                {"analytic_info", an.eve_info},
                {"sifted", static_cast<long long>(r.tally.stats.sifted)},
                {"errors", static_cast<long long>(r.tally.stats.errors)},
                {"eve_known", static_cast<long long>(r.tally.stats.eve_known)},
            };
            if (!storage) {
                rec.emplace_back("conclusive_fraction",
                                 r.tally.measured ? static_cast<double>(r.tally.conclusive) /
                                                        static_cast<double>(r.tally.measured)
                                                  : 0.0);
                rec.emplace_back("misidentified", static_cast<long long>(r.tally.misidentified));
            }
            t.results.push_back(std::move(rec));
        }
    }
    return t;
}

Table cmd_sweep(const Options& o) {
    if (o.a.empty()) throw UsageError("sweep requires --a");
    const auto grid = length_grid(o);
    Table t;
    t.config = base_config("sweep", o);
    for (double a : o.a) {
        for (double l : grid) {
            const CurvePoint c = evaluate_point(a, l, o.mu_b, o.alpha);
            t.results.push_back({{"length_km", c.length_km},
                                 {"a", c.a},
                                 {"info_storage", c.info_storage},
                                 {"info_irud", c.info_irud},
                                 {"info_best", c.info_best}});
        }
    }
    return t;
}

Table cmd_optimize(const Options& o) {
    const auto grid = length_grid(o);
    Table t;
    t.config = base_config("optimize", o);
    for (double l : grid) {
        const OptimalA opt = optimize_a(l, o.mu_b, 1e-6, o.alpha);
        t.results.push_back({{"length_km", l},
                             {"a_star", opt.a_star},
                             {"info_star", opt.info_star},
                             {"info_a0", evaluate_point(0.0, l, o.mu_b, o.alpha).info_best},
                             {"info_a1", evaluate_point(1.0, l, o.mu_b, o.alpha).info_best}});
    }
    return t;
}

Table cmd_limits(const Options& o) {
    std::vector<LimitPolicy> policies;
    if (o.policy == "optimal") {
        policies.push_back(LimitPolicy::optimal());
    } else {
        if (o.a.empty()) throw UsageError("--policy fixed requires --a");
        for (double a : o.a) policies.push_back(LimitPolicy::fixed(a));
    }
    if (!(o.tol_km > 0.0 && o.tol_km <= 0.1)) throw UsageError("--tol-km must be in (0, 0.1]");
    Table t;
    t.config = base_config("limits", o);
    t.config.emplace_back("policy", o.policy);
    t.config.emplace_back("tol_km", o.tol_km);
    for (const auto& p : policies) {
        const LimitReport r = ultimate_limit(p, o.mu_b, o.tol_km, o.alpha);
        Record rec{{"policy", o.policy}};
        if (p.kind == LimitPolicy::Kind::FixedA) rec.emplace_back("a", p.a);
        rec.emplace_back("found", r.found);
        rec.emplace_back("limit_km", r.limit_km);
        rec.emplace_back("bracket_low", r.bracket_low);
        rec.emplace_back("bracket_high", r.bracket_high);
        rec.emplace_back("residual", r.residual);
        t.results.push_back(std::move(rec));
    }
    return t;
}

Table cmd_verify_theorem(const Options& o) {
    if (o.grid_a < 11 || o.grid_l < 11) throw UsageError("--grid-a and --grid-l must be >= 11");
    if (!(o.l_min < o.l_max)) throw UsageError("--l-min must be < --l-max");
    const TheoremReport r = verify_theorem(o.grid_a, o.grid_l, o.mu_b, o.l_min, o.l_max, o.alpha);
    Table t;
    t.config = base_config("verify-theorem", o);
    t.config.emplace_back("grid_a", static_cast<long long>(o.grid_a));
    t.config.emplace_back("grid_l", static_cast<long long>(o.grid_l));
    t.config.emplace_back("l_min", o.l_min);
    t.config.emplace_back("l_max", o.l_max);
    auto row = [&](AttackType type, int checked, int saturated) {
        long long bad = 0;
        for (const auto& v : r.violations) bad += v.attack == type;
        t.results.push_back({{"attack", std::string(to_string(type))},
                             {"expected_sign", std::string(type == AttackType::Storage ? "+" : "-")},
                             {"checked", static_cast<long long>(checked)},
                             {"saturated", static_cast<long long>(saturated)},
                             {"violations", bad}});
    };
    row(AttackType::Storage, r.checked_storage, r.saturated_storage);
    row(AttackType::Irud, r.checked_irud, r.saturated_irud);
    return t;
}

std::string field_text(const Field& f) {
    struct Visitor {
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(const std::string& v) const { return v; }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
    };
    return std::visit(Visitor{}, f);
}

nlohmann::ordered_json field_json(const Field& f) {
    struct Visitor {
        nlohmann::ordered_json operator()(double v) const {
            if (!std::isfinite(v)) return nullptr;
            return std::stod(format_number(v));
        }
        nlohmann::ordered_json operator()(long long v) const { return v; }
        nlohmann::ordered_json operator()(const std::string& v) const { return v; }
        nlohmann::ordered_json operator()(bool v) const { return v; }
    };
    return std::visit(Visitor{}, f);
}

nlohmann::ordered_json record_json(const Record& r) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r) j[k] = field_json(v);
    return j;
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string to_csv(const Table& t) {
    std::string s;
    if (t.results.empty()) return s;
    for (std::size_t i = 0; i < t.results.front().size(); ++i) {
        if (i) s += ',';
        s += t.results.front()[i].first;
    }
    s += '\n';
    for (const auto& r : t.results) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) s += ',';
            s += field_text(r[i].second);
        }
        s += '\n';
    }
    return s;
}

std::string to_json(const Table& t) {
    nlohmann::ordered_json j;
    j["config"] = record_json(t.config);
    j["results"] = nlohmann::ordered_json::array();
    for (const auto& r : t.results) j["results"].push_back(record_json(r));
    return j.dump(2) + "\n";
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Selecting-announcement QKD: protocol simulation and PNS attack analysis", "saqkd"};
    app.set_help_flag();
    app.set_help_all_flag("-h,--help", "Print help for every command and flag, then exit");
    app.require_subcommand(1, 1);

    Options o;
    auto add_params = [&](CLI::App* sub) {
        sub->add_option("--mu-b", o.mu_b, "Base (BB84) mean photon number")->capture_default_str();
        sub->add_option("--alpha", o.alpha, "Fiber attenuation [dB/km]")->capture_default_str();
        sub->add_option("--eta-d", o.eta_d, "Detector quantum efficiency")->capture_default_str();
        sub->add_option("--format", o.format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        sub->add_option("--out", o.out_path, "Write output to this file instead of stdout");
    };
    auto add_a = [&](CLI::App* sub) {
        sub->add_option("--a", o.a, "Selecting probability, scalar or comma-separated list")->delimiter(',');
    };
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--l", o.l, "Fiber length(s) [km]; overrides the grid")->delimiter(',');
        sub->add_option("--l-min", o.l_min, "Grid start [km]")->capture_default_str();
        sub->add_option("--l-max", o.l_max, "Grid end [km]")->capture_default_str();
        sub->add_option("--l-step", o.l_step, "Grid spacing [km]")->capture_default_str();
    };
    auto add_mc = [&](CLI::App* sub) {
        sub->add_option("--pulses", o.pulses, "Number of pulses")->capture_default_str();
        sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    };

    std::function<Table(const Options&)> handler;

    auto* simulate = app.add_subcommand("simulate", "Single-photon sessions without an eavesdropper");
    add_a(simulate);
    add_params(simulate);
    simulate->add_option("--l", o.l, "Fiber length [km]")->expected(1);
    add_mc(simulate);
    simulate->callback([&] { handler = cmd_simulate; });

    auto* attack = app.add_subcommand("attack-sim", "Monte-Carlo storage or IRUD eavesdropper");
    add_a(attack);
    add_params(attack);
    attack->add_option("--l", o.l, "Fiber length(s) [km]")->delimiter(',');
    attack->add_option("--attack", o.attack, "Attack type")
        ->check(CLI::IsMember({"storage", "irud"}))
        ->capture_default_str();
    add_mc(attack);
    attack->callback([&] { handler = cmd_attack_sim; });

    auto* sweep_cmd = app.add_subcommand("sweep", "Eve's information versus distance");
    add_a(sweep_cmd);
    add_params(sweep_cmd);
    add_grid(sweep_cmd);
    sweep_cmd->callback([&] { handler = cmd_sweep; });

    auto* optimize = app.add_subcommand("optimize", "Optimal selecting probability versus distance");
    add_params(optimize);
    add_grid(optimize);
    optimize->callback([&] { handler = cmd_optimize; });

    auto* limits = app.add_subcommand("limits", "Distance at which Eve gains full information");
    add_a(limits);
    add_params(limits);
    limits->add_option("--policy", o.policy, "fixed (uses --a) or optimal")
        ->check(CLI::IsMember({"fixed", "optimal"}))
        ->capture_default_str();
    limits->add_option("--tol-km", o.tol_km, "Bracket width [km]")->capture_default_str();
    limits->callback([&] { handler = cmd_limits; });

    auto* theorem = app.add_subcommand("verify-theorem", "Finite-difference signs of dI/da for both attacks");
    add_params(theorem);
    theorem->add_option("--grid-a", o.grid_a, "Points in a over [0, 1]")->capture_default_str();
    theorem->add_option("--grid-l", o.grid_l, "Points in length")->capture_default_str();
    theorem->add_option("--l-min", o.l_min, "Length grid start [km]");
    theorem->add_option("--l-max", o.l_max, "Length grid end [km]");
    theorem->callback([&] {
        handler = cmd_verify_theorem;
    });
    // verify-theorem has its own length defaults
    theorem->preparse_callback([&](std::size_t) {
        o.l_min = 5.0;
        o.l_max = 80.0;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "saqkd: " << e.what() << "\n";
        return kUsage;
    }

    Table table;
    try {
        check_common(o);
        table = handler(o);
    } catch (const UsageError& e) {
        err << "saqkd: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "saqkd: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "saqkd: " << e.what() << "\n";
        return kFailure;
    }

    const std::string text = o.format == "json" ? to_json(table) : to_csv(table);
    if (o.out_path.empty()) {
        out << text;
        return kOk;
    }
    std::ofstream file(o.out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
        err << "saqkd: cannot open " << o.out_path << " for writing\n";
        return kIo;
    }
    file << text;
    file.flush();
    if (!file) {
        err << "saqkd: write to " << o.out_path << " failed\n";
        return kIo;
    }
    return kOk;
}

}  // namespace saqkd::cli
