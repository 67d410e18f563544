#include "hhsv/mc_harness.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "hhsv/affine_odes.hpp"
#include "hhsv/config.hpp"
#include "hhsv/hawkes_sim.hpp"
#include "hhsv/jump_mgf.hpp"
#include "hhsv/measures.hpp"
#include "hhsv/sde_sim.hpp"

namespace hhsv {

namespace {

constexpr std::size_t kCheckpoints = 5;
constexpr double kComparisonTol = 1e-12;
constexpr double kClTol = 1e-10;
constexpr std::size_t kOdeSteps = 4000;

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void prepare(const Experiment& e, ExperimentKind expected) {
    if (e.kind != expected) {
        throw std::invalid_argument(std::string("experiment kind is ") + to_string(e.kind) +
                                    ", expected " + to_string(expected));
    }
    validate(e.params);
    if (e.n_paths < kMinPaths) {
        throw std::invalid_argument("experiments need at least 100 paths");
    }
    if (e.grid.t_start() != 0.0 || e.grid.t_end() != e.params.model.horizon) {
        throw std::invalid_argument("experiment grid must span [0, T]");
    }
    if (e.sink) {
        *e.sink << "[hhsv] " << to_string(e.kind) << " config_hash=" << std::hex << std::setw(16)
                << std::setfill('0') << config_hash(e) << std::dec << std::setfill(' ')
                << " n_paths=" << e.n_paths << " seed=" << e.master_seed << "\n";
    }
}

std::vector<double> checkpoint_times(double horizon) {
    std::vector<double> out;
    for (std::size_t k = 1; k <= kCheckpoints; ++k) {
        out.push_back(k == kCheckpoints ? horizon
                                        : horizon * static_cast<double>(k) / static_cast<double>(kCheckpoints));
    }
    return out;
}

std::vector<std::size_t> checkpoint_indices(const TimeGrid& grid) {
    if (grid.n_steps() % kCheckpoints != 0) {
        throw std::invalid_argument("grid steps must be a multiple of 5 for the mean checkpoints");
    }
    std::vector<std::size_t> out;
    for (std::size_t k = 1; k <= kCheckpoints; ++k) out.push_back(grid.n_steps() / kCheckpoints * k);
    return out;
}

std::string time_label(const char* what, double t) {
    std::ostringstream os;
    os << what << " t=" << std::setprecision(6) << t;
    return os.str();
}

void stamp(std::vector<McReport>& reports, const Stopwatch& clock) {
    const double elapsed = clock.seconds();
    for (auto& r : reports) r.wall_time_s = elapsed;
}

}  // namespace

const char* to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::exp_moment: return "exp-moment";
        case ExperimentKind::mean_variance: return "mean-variance";
        case ExperimentKind::comparison: return "comparison";
        case ExperimentKind::martingale: return "martingale";
        case ExperimentKind::emm: return "emm";
        case ExperimentKind::hawkes_moments: return "hawkes-moments";
    }
    return "unknown";
}

std::string experiment_descriptor(const Experiment& e) {
    const nlohmann::json j = {
        {"kind", to_string(e.kind)},
        {"params", bundle_to_json(e.params)},
        {"n_paths", e.n_paths},
        {"master_seed", e.master_seed},
        {"grid", {{"t_start", e.grid.t_start()}, {"t_end", e.grid.t_end()}, {"n_steps", e.grid.n_steps()}}},
    };
    return j.dump();
}

std::uint64_t config_hash(const Experiment& e) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : experiment_descriptor(e)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double expected_intensity(const HawkesParams& hawkes, double t) {
    const double gap = hawkes.beta - hawkes.alpha;
    return hawkes.lambda0 * (hawkes.beta - hawkes.alpha * std::exp(-gap * t)) / gap;
}

double expected_jump_free_variance(const ModelParams& model, double t) {
    const double decay = std::exp(-model.kappa * t);
    return model.v0 * decay + model.vbar * (1.0 - decay);
}

double expected_variance(const ModelBundle& bundle, double t, std::size_t steps) {
    if (t <= 0.0) return bundle.model.v0;
    const auto& m = bundle.model;
    const double jump_rate = m.eta * mean(bundle.law);
    auto rhs = [&](double s, double x) {
        return -m.kappa * (x - m.vbar) + jump_rate * expected_intensity(bundle.hawkes, s);
    };
    const double h = t / static_cast<double>(steps);
    double x = m.v0;
    for (std::size_t i = 0; i < steps; ++i) {
        const double s = static_cast<double>(i) * h;
        const double k1 = rhs(s, x);
        const double k2 = rhs(s + 0.5 * h, x + 0.5 * h * k1);
        const double k3 = rhs(s + 0.5 * h, x + 0.5 * h * k2);
        const double k4 = rhs(s + h, x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

std::vector<McReport> run_exp_moment(const std::vector<double>& c_values, const Experiment& e) {
    prepare(e, ExperimentKind::exp_moment);
    const Stopwatch clock;
    const auto& bundle = e.params;
    const double c_l = compute_c_l(bundle, kClTol);
    const TimeGrid ode_grid(0.0, bundle.model.horizon, kOdeSteps);
    std::vector<double> bounds;
    for (double c : c_values) {
        if (!(c < c_l)) {
            std::ostringstream os;
            os << "exponential moment check needs c < c_l = " << c_l << ", got " << c;
            throw std::domain_error(os.str());
        }
        bounds.push_back(supermartingale_bound(bundle, c, ode_grid));
    }

    std::vector<double> integrated(e.n_paths);
    parallel_paths(e.n_paths, e.workers, [&](std::size_t i) {
        RngStream hawkes_stream(e.master_seed, i, StreamPurpose::hawkes);
        RngStream variance_stream(e.master_seed, i, StreamPurpose::variance);
        const auto marked = simulate_hawkes(bundle.hawkes, bundle.law, bundle.model.horizon, hawkes_stream);
        const auto v = simulate_variance(bundle.model, marked, e.grid, VarianceScheme::exact_transition,
                                         variance_stream);
        integrated[i] = v.integrated_variance_total();
    });

    std::vector<McReport> out;
    std::vector<double> samples(e.n_paths);
    for (std::size_t j = 0; j < c_values.size(); ++j) {
        for (std::size_t i = 0; i < e.n_paths; ++i) samples[i] = std::exp(c_values[j] * integrated[i]);
        std::ostringstream name;
        name << "E[exp(c int v)] c=" << std::setprecision(6) << c_values[j];
        out.push_back(bound_report(name.str(), summarize(samples), bounds[j]));
    }
    stamp(out, clock);
    return out;
}

McReport run_exp_moment(double c, const Experiment& e) {
    return run_exp_moment(std::vector<double>{c}, e).front();
}

std::vector<McReport> run_mean_variance(const Experiment& e) {
    prepare(e, ExperimentKind::mean_variance);
    const Stopwatch clock;
    const auto& bundle = e.params;
    const auto idx = checkpoint_indices(e.grid);
    std::vector<std::vector<double>> jump_free(kCheckpoints, std::vector<double>(e.n_paths));
    std::vector<std::vector<double>> full(kCheckpoints, std::vector<double>(e.n_paths));
    const MarkedPointPath no_events{{}, {}, bundle.hawkes, bundle.model.horizon};

    parallel_paths(e.n_paths, e.workers, [&](std::size_t i) {
        RngStream hawkes_stream(e.master_seed, i, StreamPurpose::hawkes);
        RngStream variance_stream(e.master_seed, i, StreamPurpose::variance);
        RngStream cir_stream(e.master_seed, i, StreamPurpose::stock);
        const auto marked = simulate_hawkes(bundle.hawkes, bundle.law, bundle.model.horizon, hawkes_stream);
        const auto v = simulate_variance(bundle.model, marked, e.grid, VarianceScheme::exact_transition,
                                         variance_stream);
        const auto w = simulate_variance(bundle.model, no_events, e.grid,
                                         VarianceScheme::exact_transition, cir_stream);
        for (std::size_t k = 0; k < kCheckpoints; ++k) {
            full[k][i] = v.value_at_grid(idx[k]);
            jump_free[k][i] = w.value_at_grid(idx[k]);
        }
    });

    std::vector<McReport> out;
    for (std::size_t k = 0; k < kCheckpoints; ++k) {
        const double t = e.grid.at(idx[k]);
        out.push_back(two_sided_report(time_label("E[v~_t]", t), summarize(jump_free[k]),
                                       expected_jump_free_variance(bundle.model, t)));
    }
    for (std::size_t k = 0; k < kCheckpoints; ++k) {
        const double t = e.grid.at(idx[k]);
        out.push_back(two_sided_report(time_label("E[v_t]", t), summarize(full[k]),
                                       expected_variance(bundle, t)));
    }
    stamp(out, clock);
    return out;
}

McReport run_comparison(const Experiment& e) {
    prepare(e, ExperimentKind::comparison);
    const Stopwatch clock;
    const auto& bundle = e.params;
    std::vector<double> violated(e.n_paths);
    parallel_paths(e.n_paths, e.workers, [&](std::size_t i) {
        RngStream stream(e.master_seed, i, StreamPurpose::variance);
        const auto pair = simulate_comparison_pair(bundle.model, bundle.hawkes, bundle.law, e.grid, stream);
        bool bad = false;
        for (std::size_t k = 0; k < pair.full.nodes() && !bad; ++k) {
            bad = pair.jump_free.values[k] > pair.full.values[k] + kComparisonTol ||
                  pair.jump_free.left_values[k] > pair.full.left_values[k] + kComparisonTol;
        }
        violated[i] = bad ? 1.0 : 0.0;
    });
    const auto s = summarize(violated);
    McReport r;
    r.name = "violation fraction v~ <= v";
    r.estimate = s.mean;
    r.std_error = s.std_error;
    r.target = 0.0;
    r.mode = ComparisonMode::bound;
    r.n_paths = s.n;
    r.pass = s.mean == 0.0;
    r.verdict = r.pass ? Verdict::pass : Verdict::fail;
    r.wall_time_s = clock.seconds();
    return r;
}

std::vector<McReport> run_hawkes_moments(const Experiment& e) {
    prepare(e, ExperimentKind::hawkes_moments);
    const Stopwatch clock;
    const auto& bundle = e.params;
    const double horizon = bundle.model.horizon;
    const auto times = checkpoint_times(horizon);
    const TimeGrid endpoints(0.0, horizon, 1);
    std::vector<double> centred_n(e.n_paths);
    std::vector<double> centred_l(e.n_paths);
    std::vector<std::vector<double>> intensity(kCheckpoints, std::vector<double>(e.n_paths));

    parallel_paths(e.n_paths, e.workers, [&](std::size_t i) {
        RngStream stream(e.master_seed, i, StreamPurpose::hawkes);
        const auto path = simulate_hawkes(bundle.hawkes, bundle.law, horizon, stream);
        const auto comp = compensators(path, bundle.law, endpoints);
        centred_n[i] = static_cast<double>(path.count_at(horizon)) - comp.counting.back();
        centred_l[i] = path.compound_at(horizon) - comp.compound.back();
        for (std::size_t k = 0; k < kCheckpoints; ++k) intensity[k][i] = intensity_at(path, times[k]);
    });

    std::vector<McReport> out;
    out.push_back(two_sided_report("N_T - Lambda^N_T", summarize(centred_n), 0.0));
    out.push_back(two_sided_report("L_T - Lambda^L_T", summarize(centred_l), 0.0));
    for (std::size_t k = 0; k < kCheckpoints; ++k) {
        out.push_back(two_sided_report(time_label("E[lambda_t]", times[k]), summarize(intensity[k]),
                                       expected_intensity(bundle.hawkes, times[k])));
    }
    stamp(out, clock);
    return out;
}

std::vector<McReport> run_martingale(const std::vector<double>& a_values, const Experiment& e) {
    prepare(e, ExperimentKind::martingale);
    const Stopwatch clock;
    const double c_l = compute_c_l(e.params, kClTol);
    const auto checks = martingale_check(e.params, a_values, c_l, e.n_paths, e.grid, e.master_seed, e.workers);
    std::vector<McReport> out;
    for (const auto& c : checks) {
        out.push_back(c.x);
        out.push_back(c.z);
    }
    stamp(out, clock);
    return out;
}

std::vector<McReport> run_emm(double a, const Experiment& e) {
    prepare(e, ExperimentKind::emm);
    const Stopwatch clock;
    const double c_l = compute_c_l(e.params, kClTol);
    const auto check = emm_check_direct(e.params, a, c_l, e.n_paths, e.grid, e.master_seed, e.workers);
    std::vector<McReport> out;
    if (check.direct) out.push_back(*check.direct);
    out.push_back(check.weighted);
    if (check.agreement) out.push_back(*check.agreement);
    stamp(out, clock);
    return out;
}

bool SuiteResult::passed() const {
    for (const auto& e : entries) {
        if (e.report.verdict == Verdict::fail) return false;
    }
    return true;
}

std::vector<std::string> suite_names() { return {"quick", "full"}; }

namespace {

struct SuiteSizes {
    std::size_t paths;
    std::size_t comparison_paths;
    std::size_t grid_steps;
    std::size_t comparison_steps;
    std::size_t density_steps;
};

SuiteSizes sizes_for(const std::string& name, double horizon) {
    // comparison runs at dt = 1e-3
    const auto fine = static_cast<std::size_t>(std::llround(horizon / 1e-3));
    if (name == "full") return {100000, 10000, 100, std::max<std::size_t>(fine, 1), 200};
    if (name == "quick") return {4000, 1000, 50, std::max<std::size_t>(fine / 4, 1), 100};
    throw std::invalid_argument("unknown suite '" + name + "' (known: quick, full)");
}

}  // namespace

SuiteResult run_suite(const std::string& name, const ModelBundle& bundle, std::uint64_t seed,
                      const SuiteOptions& options) {
    auto sizes = sizes_for(name, bundle.model.horizon);
    validate(bundle);
    if (options.n_paths) sizes.paths = sizes.comparison_paths = *options.n_paths;
    if (options.grid_steps) {
        sizes.grid_steps = sizes.comparison_steps = sizes.density_steps = *options.grid_steps;
    }

    SuiteResult result;
    result.suite = name;
    result.seed = seed;
    result.c_l = compute_c_l(bundle, kClTol);
    result.c_s = compute_c_s(bundle);
    const double horizon = bundle.model.horizon;

    auto experiment = [&](ExperimentKind kind, std::size_t paths, std::size_t steps) {
        Experiment e;
        e.kind = kind;
        e.params = bundle;
        e.n_paths = paths;
        e.master_seed = seed;
        e.grid = TimeGrid(0.0, horizon, steps);
        e.workers = options.workers;
        e.sink = options.sink;
        return e;
    };
    auto add = [&](const char* group, const Experiment& e, const std::vector<McReport>& reports) {
        const auto h = config_hash(e);
        for (const auto& r : reports) result.entries.push_back({group, h, r});
    };

    {
        const auto e = experiment(ExperimentKind::exp_moment, sizes.paths, sizes.grid_steps);
        const double c_l = result.c_l;
        add("exp-moment", e, run_exp_moment({0.0, 0.25 * c_l, 0.5 * c_l, 0.75 * c_l}, e));
    }
    {
        const auto e = experiment(ExperimentKind::comparison, sizes.comparison_paths, sizes.comparison_steps);
        add("comparison", e, {run_comparison(e)});
    }
    {
        const auto e = experiment(ExperimentKind::mean_variance, sizes.paths, sizes.grid_steps);
        add("mean-variance", e, run_mean_variance(e));
    }
    {
        const auto e = experiment(ExperimentKind::hawkes_moments, sizes.paths, sizes.grid_steps);
        add("hawkes-moments", e, run_hawkes_moments(e));
    }
    {
        const auto e = experiment(ExperimentKind::martingale, sizes.paths, sizes.density_steps);
        const double top = elmm_bound(result.c_l);
        add("martingale", e, run_martingale({0.3 * top, 0.6 * top, 0.9 * top}, e));
    }
    {
        const double bound = emm_bound(result.c_l, bundle.model.rho);
        if (bound > 0.0) {
            const auto e = experiment(ExperimentKind::emm, sizes.paths, sizes.density_steps);
            add("emm", e, run_emm(0.5 * bound, e));
        }
    }
    return result;
}

}  // namespace hhsv
