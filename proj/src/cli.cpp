#include "hhsv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hhsv/affine_odes.hpp"
#include "hhsv/config.hpp"
#include "hhsv/hawkes_sim.hpp"
#include "hhsv/jump_mgf.hpp"
#include "hhsv/mc_harness.hpp"
#include "hhsv/measures.hpp"
#include "hhsv/sde_sim.hpp"

namespace hhsv::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Options {
    std::string config;
    std::string out = ".";
    std::uint64_t seed = 42;
    std::optional<std::size_t> paths;
    std::optional<std::size_t> grid_steps;
    std::optional<double> c;
    std::optional<double> a;
    std::string suite = "full";
    unsigned workers = 1;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ModelBundle bundle_for(const Options& o) {
    return o.config.empty() ? validate(default_bundle()) : load_config(o.config);
}

TimeGrid horizon_grid(const ModelBundle& b, std::size_t steps) {
    if (steps == 0) throw UsageError("--grid-steps must be positive");
    return TimeGrid(0.0, b.model.horizon, steps);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void emit(const Options& o, const std::string& file, const std::string& content) {
    const fs::path path = fs::path(o.out) / file;
    write_atomic(path, content);
    std::cerr << "wrote " << path.string() << "\n";
}

json check_json(double a, Admissibility cls, const McReport& r) {
    return {{"a", a},
            {"classification", to_string(cls)},
            {"estimate", r.estimate},
            {"std_error", r.std_error},
            {"target", r.target},
            {"pass", r.pass},
            {"verdict", to_string(r.verdict)},
            {"n_paths", r.n_paths}};
}

int verdict_code(bool pass) { return pass ? kExitOk : kExitCheckFailed; }

int cmd_simulate(const Options& o) {
    const auto b = bundle_for(o);
    const auto grid = horizon_grid(b, o.grid_steps.value_or(100));
    const std::size_t n = o.paths.value_or(10);
    std::ostringstream paths;
    paths << std::setprecision(15);
    write_path_csv_header(paths);
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = simulate_physical_path(b, grid, o.seed, i);
        write_path_csv_rows(paths, i, p.marked, p.variance, p.stock);
        std::ostringstream events;
        write_events_csv(events, p.marked);
        emit(o, "events_" + std::to_string(i) + ".csv", events.str());
    }
    emit(o, "paths.csv", paths.str());
    return kExitOk;
}

int cmd_odes(const Options& o) {
    const auto b = bundle_for(o);
    const double c = o.c.value_or(0.0);
    const double c_l = compute_c_l(b);
    if (!c_feasible(b, c)) {
        std::ostringstream os;
        os << "--c " << c << " is outside the feasible range (c_l = " << c_l << ")";
        throw UsageError(os.str());
    }
    const auto sol = solve_odes(b, c, horizon_grid(b, o.grid_steps.value_or(1000)));
    std::ostringstream csv;
    csv << std::setprecision(15) << "t,G,H,F\n";
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        csv << sol.grid.at(i) << ',' << sol.g[i] << ',' << sol.h[i] << ',' << sol.f[i] << '\n';
    }
    emit(o, "odes.csv", csv.str());
    const json summary = {{"c", c},
                          {"D", sol.context.d},
                          {"Lambda", sol.context.lambda_c},
                          {"U", sol.context.u},
                          {"x_p", sol.context.x_p},
                          {"c_s", compute_c_s(b)},
                          {"c_l", c_l},
                          {"bound_M0", sol.bound_m0}};
    emit(o, "odes_summary.json", dump(summary));
    std::cout << dump(summary);
    return kExitOk;
}

int cmd_cs_table(const Options& o) {
    const auto base = bundle_for(o);
    const std::vector<JumpLaw> laws{ExponentialJumps{10.0}, GammaJumps{2.0, 20.0}, ConstantJumps{0.1}};
    std::ostringstream csv;
    csv << std::setprecision(15) << "law,c_s,c_l,riccati_cap\n";
    bool ordered = true;
    for (const auto& law : laws) {
        auto b = base;
        b.law = law;
        validate(b);
        const double c_s = compute_c_s(b);
        const double c_l = compute_c_l(b);
        ordered = ordered && 0.0 < c_s && c_s < c_l;
        csv << law_name(law) << ',' << c_s << ',' << c_l << ',' << riccati_cap(b.model) << '\n';
    }
    emit(o, "cs_table.csv", csv.str());
    std::cout << csv.str();
    if (!ordered) std::cerr << "c_s < c_l does not hold for every law\n";
    return verdict_code(ordered);
}

int cmd_cl_solve(const Options& o) {
    const auto b = bundle_for(o);
    const double c_l = compute_c_l(b);
    const json j = {{"law", law_name(b.law)},
                    {"c_l", c_l},
                    {"c_s", compute_c_s(b)},
                    {"riccati_cap", riccati_cap(b.model)},
                    {"Lambda_c_l", big_lambda(b.model, c_l)},
                    {"hawkes_threshold", hawkes_threshold(b.hawkes)},
                    {"elmm_bound", elmm_bound(c_l)},
                    {"emm_bound", emm_bound(c_l, b.model.rho)}};
    emit(o, "cl_solve.json", dump(j));
    std::cout << dump(j);
    return kExitOk;
}

Experiment experiment_for(const Options& o, const ModelBundle& b, ExperimentKind kind,
                          std::size_t default_steps) {
    Experiment e;
    e.kind = kind;
    e.params = b;
    e.n_paths = o.paths.value_or(100000);
    e.master_seed = o.seed;
    e.grid = horizon_grid(b, o.grid_steps.value_or(default_steps));
    e.workers = o.workers;
    e.sink = &std::cerr;
    return e;
}

int cmd_bound_check(const Options& o) {
    const auto b = bundle_for(o);
    const double c_l = compute_c_l(b);
    const double c = o.c.value_or(0.5 * c_l);
    if (!(c < c_l)) {
        std::ostringstream os;
        os << "--c " << c << " must be below c_l = " << c_l;
        throw UsageError(os.str());
    }
    const auto e = experiment_for(o, b, ExperimentKind::exp_moment, 100);
    const auto r = run_exp_moment(c, e);
    const json j = {{"c", c},
                    {"c_l", c_l},
                    {"estimate", r.estimate},
                    {"std_error", r.std_error},
                    {"target", r.target},
                    {"pass", r.pass},
                    {"verdict", to_string(r.verdict)},
                    {"n_paths", r.n_paths}};
    emit(o, "bound_check.json", dump(j));
    std::cout << dump(j);
    return verdict_code(r.verdict != Verdict::fail);
}

int cmd_martingale_check(const Options& o) {
    const auto b = bundle_for(o);
    const double c_l = compute_c_l(b);
    const double a = o.a.value_or(0.5 * elmm_bound(c_l));
    const auto e = experiment_for(o, b, ExperimentKind::martingale, 200);
    const auto reports = run_martingale({a}, e);
    const auto cls = classify(a, c_l, b.model.rho);
    json j = check_json(a, cls, reports[0]);
    j["z"] = check_json(a, cls, reports[1]);
    emit(o, "martingale_check.json", dump(j));
    std::cout << dump(j);
    const bool pass = reports[0].verdict != Verdict::fail && reports[1].verdict != Verdict::fail;
    return verdict_code(pass);
}

int cmd_emm_check(const Options& o) {
    const auto b = bundle_for(o);
    const double c_l = compute_c_l(b);
    const double a = o.a.value_or(0.5 * emm_bound(c_l, b.model.rho));
    const auto cls = classify(a, c_l, b.model.rho);
    if (cls != Admissibility::emm) {
        std::ostringstream os;
        os << "--a " << a << " is " << to_string(cls) << "; emm-check needs |a| < "
           << emm_bound(c_l, b.model.rho);
        throw UsageError(os.str());
    }
    const auto e = experiment_for(o, b, ExperimentKind::emm, 200);
    const auto reports = run_emm(a, e);
    json j = check_json(a, cls, reports.front());
    bool pass = true;
    json parts = json::array();
    for (const auto& r : reports) {
        parts.push_back(report_to_json(r));
        pass = pass && r.verdict != Verdict::fail;
    }
    j["pass"] = pass;
    j["reports"] = parts;
    emit(o, "emm_check.json", dump(j));
    std::cout << dump(j);
    return verdict_code(pass);
}

int cmd_verify(const Options& o) {
    const auto b = bundle_for(o);
    SuiteOptions so;
    so.n_paths = o.paths;
    so.grid_steps = o.grid_steps;
    so.workers = o.workers;
    so.sink = &std::cerr;
    const auto known = suite_names();
    if (std::find(known.begin(), known.end(), o.suite) == known.end()) {
        throw UsageError("unknown suite '" + o.suite + "'");
    }
    const auto result = run_suite(o.suite, b, o.seed, so);
    const auto table = suite_table(result);
    emit(o, "verify.json", dump(suite_to_json(result)));
    emit(o, "verify_table.txt", table);
    std::cout << table;
    return verdict_code(result.passed());
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Heston variance with compound Hawkes jumps: simulation, affine ODEs and checks",
                 "hhsv"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON parameter file (defaults if omitted)")
            ->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory")->capture_default_str();
        sub->add_option("--seed", o.seed, "master seed")->capture_default_str();
        sub->add_option("--paths", o.paths, "number of Monte Carlo paths");
        sub->add_option("--grid-steps", o.grid_steps, "time steps on [0, T]");
        sub->add_option("--workers", o.workers, "threads; 0 = all cores")->capture_default_str();
    };

    struct Entry {
        const char* name;
        const char* help;
        int (*fn)(const Options&);
    };
    const Entry entries[] = {
        {"simulate", "dump simulated paths and event lists", cmd_simulate},
        {"odes", "solve G, H, F for one exponent c", cmd_odes},
        {"cs-table", "c_s and c_l for the three reference jump laws", cmd_cs_table},
        {"cl-solve", "locate c_l for the configured law", cmd_cl_solve},
        {"bound-check", "Monte Carlo exponential moment against the bound", cmd_bound_check},
        {"martingale-check", "E[X_T] and E[Z_T] for one a", cmd_martingale_check},
        {"emm-check", "discounted stock under Q(a), direct and weighted", cmd_emm_check},
        {"verify", "run a named verification suite", cmd_verify},
    };
    int (*chosen)(const Options&) = nullptr;
    for (const auto& entry : entries) {
        auto* sub = app.add_subcommand(entry.name, entry.help);
        common(sub);
        const std::string name = entry.name;
        if (name == "odes" || name == "bound-check") sub->add_option("--c", o.c, "exponent c");
        if (name == "martingale-check" || name == "emm-check") {
            sub->add_option("--a", o.a, "Girsanov parameter a");
        }
        if (name == "verify") {
            sub->add_option("--suite", o.suite, "quick or full")->capture_default_str();
        }
        sub->callback([&chosen, fn = entry.fn] { chosen = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (code == 0) return kExitOk;
        std::cerr << app.help();
        return kExitUsage;
    }

    try {
        if (o.paths && *o.paths < kMinPaths && chosen != cmd_simulate) {
            throw UsageError("--paths must be at least 100");
        }
        return chosen(o);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ValidationError& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}

}  // namespace hhsv::cli
