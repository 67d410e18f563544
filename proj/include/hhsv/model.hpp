#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hhsv {

/// Piecewise-constant drift mu(t), right-continuous, defined by breakpoints.
/// The first breakpoint must start at t = 0; the last piece extends to +inf.
class DriftSchedule {
public:
    struct Breakpoint {
        double t_from;
        double value;
    };

    DriftSchedule() : DriftSchedule(0.0) {}
    explicit DriftSchedule(double constant);
    explicit DriftSchedule(std::vector<Breakpoint> breakpoints);

    double at(double t) const;
    /// Exact integral of mu over [t0, t1].
    double integral(double t0, double t1) const;
    double sup_abs() const;

    const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }

private:
    std::vector<Breakpoint> breakpoints_;
};

struct ModelParams {
    double s0 = 100.0;
    double v0 = 0.04;
    double kappa = 2.0;
    double vbar = 0.04;
    double sigma = 0.3;
    double eta = 0.5;
    double rho = -0.5;
    double r = 0.02;
    DriftSchedule mu{0.05};
    double horizon = 1.0;
};

struct HawkesParams {
    double lambda0 = 1.0;
    double alpha = 1.0;
    double beta = 2.0;
};

struct ExponentialJumps {
    double rate;
};
struct GammaJumps {
    double shape;
    double rate;
};
struct ConstantJumps {
    double value;
};

using JumpLaw = std::variant<ExponentialJumps, GammaJumps, ConstantJumps>;

std::string law_name(const JumpLaw& law);

/// The full parameter set of the model.
struct ModelBundle {
    ModelParams model;
    HawkesParams hawkes;
    JumpLaw law = ExponentialJumps{10.0};
};

/// Default parameter set used by the verification suites.
ModelBundle default_bundle();

/// Uniform grid t_start = t_0 < t_1 < ... < t_n = t_end.
class TimeGrid {
public:
    TimeGrid(double t_start, double t_end, std::size_t n_steps);

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    std::size_t n_steps() const { return n_steps_; }
    std::size_t size() const { return n_steps_ + 1; }
    double dt() const { return (t_end_ - t_start_) / static_cast<double>(n_steps_); }
    /// Endpoints are returned exactly.
    double at(std::size_t i) const;
    std::vector<double> points() const;

    bool operator==(const TimeGrid&) const = default;

private:
    double t_start_;
    double t_end_;
    std::size_t n_steps_;
};

enum class ViolationKind { feller, stability, domain };

struct Violation {
    ViolationKind kind;
    std::string field;
    std::string message;
};

class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Lists every violated invariant; empty when the bundle is admissible.
std::vector<Violation> check(const ModelBundle& bundle);

/// Returns the bundle unchanged, or throws ValidationError naming each violation.
ModelBundle validate(ModelBundle bundle);

}  // namespace hhsv
