#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hhsv/model.hpp"
#include "hhsv/statistics.hpp"

namespace hhsv {

enum class ExperimentKind { exp_moment, mean_variance, comparison, martingale, emm, hawkes_moments };

const char* to_string(ExperimentKind kind);

struct Experiment {
    ExperimentKind kind = ExperimentKind::exp_moment;
    ModelBundle params;
    std::size_t n_paths = 100000;
    std::uint64_t master_seed = 42;
    TimeGrid grid{0.0, 1.0, 100};
    unsigned workers = 1;             // does not affect results
    std::ostream* sink = nullptr;     // run log; nullptr is silent
};

inline constexpr std::size_t kMinPaths = 100;

/// Canonical JSON text of everything that determines an experiment's result.
std::string experiment_descriptor(const Experiment& e);

/// FNV-1a hash of the descriptor.
std::uint64_t config_hash(const Experiment& e);

// Analytic targets.

/// E[lambda_t] = lambda0 (beta - alpha e^{(alpha - beta) t}) / (beta - alpha).
double expected_intensity(const HawkesParams& hawkes, double t);

/// E[v~_t] = v0 e^{-kappa t} + vbar (1 - e^{-kappa t}) for the jump-free process.
double expected_jump_free_variance(const ModelParams& model, double t);

/// E[v_t] from m' = -kappa (m - vbar) + eta E[J] E[lambda_t], m(0) = v0, by RK4.
double expected_variance(const ModelBundle& bundle, double t, std::size_t steps = 10000);

// Experiments. Each validates its inputs and logs its config hash to the sink.

/// E[exp(c int_0^T v du)] against the supermartingale bound, one report per c.
std::vector<McReport> run_exp_moment(const std::vector<double>& c_values, const Experiment& e);
McReport run_exp_moment(double c, const Experiment& e);

/// Jump-free and full-model E[v_t] at t = (0.2, 0.4, ..., 1.0) T.
std::vector<McReport> run_mean_variance(const Experiment& e);

/// Fraction of coupled paths with v~ > v + 1e-12 somewhere; passes iff zero.
McReport run_comparison(const Experiment& e);

/// Compensated N and L at T, and E[lambda_t] at t = (0.2, ..., 1.0) T.
std::vector<McReport> run_hawkes_moments(const Experiment& e);

/// E[X_T] and E[Z_T] for each a.
std::vector<McReport> run_martingale(const std::vector<double>& a_values, const Experiment& e);

/// Direct Q, importance-weighted and agreement reports for one EMM-admissible a.
std::vector<McReport> run_emm(double a, const Experiment& e);

/// Named collection of experiments.
struct SuiteEntry {
    std::string group;
    std::uint64_t config_hash;
    McReport report;
};

struct SuiteResult {
    std::string suite;
    std::uint64_t seed = 0;
    double c_l = 0.0;
    double c_s = 0.0;
    std::vector<SuiteEntry> entries;

    /// true iff no check failed; inconclusive checks do not count.
    bool passed() const;
};

struct SuiteOptions {
    std::optional<std::size_t> n_paths;      // overrides every experiment's path count
    std::optional<std::size_t> grid_steps;   // overrides the simulation grid
    unsigned workers = 1;
    std::ostream* sink = nullptr;
};

std::vector<std::string> suite_names();

/// "full" runs every check at its acceptance size; "quick" is a scaled-down smoke version.
SuiteResult run_suite(const std::string& name, const ModelBundle& bundle, std::uint64_t seed,
                      const SuiteOptions& options = {});

}  // namespace hhsv
