#include "hhsv/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <type_traits>

namespace hhsv {

namespace {

constexpr double kFellerRelTol = 1e-12;

std::string describe(const std::vector<Violation>& violations) {
    std::ostringstream os;
    os << "invalid parameters:";
    for (const auto& v : violations) {
        os << " [" << v.field << "] " << v.message << ";";
    }
    return os.str();
}

void require_positive(std::vector<Violation>& out, const char* field, double value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream os;
        os << field << " = " << value << " must be finite and > 0";
        out.push_back({ViolationKind::domain, field, os.str()});
    }
}

}  // namespace

DriftSchedule::DriftSchedule(double constant) : breakpoints_{{0.0, constant}} {}

DriftSchedule::DriftSchedule(std::vector<Breakpoint> breakpoints)
    : breakpoints_(std::move(breakpoints)) {
    if (breakpoints_.empty()) {
        throw std::invalid_argument("drift schedule needs at least one breakpoint");
    }
    if (breakpoints_.front().t_from != 0.0) {
        throw std::invalid_argument("drift schedule must start at t_from = 0");
    }
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (!std::isfinite(breakpoints_[i].value) || !std::isfinite(breakpoints_[i].t_from)) {
            throw std::invalid_argument("drift schedule values must be finite");
        }
        if (i > 0 && !(breakpoints_[i].t_from > breakpoints_[i - 1].t_from)) {
            throw std::invalid_argument("drift breakpoints must be strictly increasing");
        }
    }
}

double DriftSchedule::at(double t) const {
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t,
                               [](double x, const Breakpoint& b) { return x < b.t_from; });
    if (it == breakpoints_.begin()) return breakpoints_.front().value;
    return std::prev(it)->value;
}

double DriftSchedule::integral(double t0, double t1) const {
    if (t1 < t0) return -integral(t1, t0);
    double total = 0.0;
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        double lo = (i == 0) ? -INFINITY : breakpoints_[i].t_from;
        double hi = (i + 1 < breakpoints_.size()) ? breakpoints_[i + 1].t_from : INFINITY;
        double a = std::max(lo, t0);
        double b = std::min(hi, t1);
        if (b > a) total += breakpoints_[i].value * (b - a);
    }
    return total;
}

double DriftSchedule::sup_abs() const {
    double m = 0.0;
    for (const auto& b : breakpoints_) m = std::max(m, std::abs(b.value));
    return m;
}

std::string law_name(const JumpLaw& law) {
    struct {
        std::string operator()(const ExponentialJumps&) const { return "exponential"; }
        std::string operator()(const GammaJumps&) const { return "gamma"; }
        std::string operator()(const ConstantJumps&) const { return "constant"; }
    } visitor;
    return std::visit(visitor, law);
}

ModelBundle default_bundle() { return ModelBundle{}; }

TimeGrid::TimeGrid(double t_start, double t_end, std::size_t n_steps)
    : t_start_(t_start), t_end_(t_end), n_steps_(n_steps) {
    if (n_steps == 0) throw std::invalid_argument("time grid needs n_steps >= 1");
    if (!(t_end > t_start) || !std::isfinite(t_start) || !std::isfinite(t_end)) {
        throw std::invalid_argument("time grid needs finite t_start < t_end");
    }
}

double TimeGrid::at(std::size_t i) const {
    if (i >= n_steps_) return t_end_;
    return t_start_ + static_cast<double>(i) * dt();
}

std::vector<double> TimeGrid::points() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i);
    return out;
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::invalid_argument(describe(violations)), violations_(std::move(violations)) {}

std::vector<Violation> check(const ModelBundle& bundle) {
    std::vector<Violation> out;
    const auto& m = bundle.model;
    require_positive(out, "s0", m.s0);
    require_positive(out, "v0", m.v0);
    require_positive(out, "kappa", m.kappa);
    require_positive(out, "vbar", m.vbar);
    require_positive(out, "sigma", m.sigma);
    require_positive(out, "eta", m.eta);
    require_positive(out, "horizon", m.horizon);
    if (!(m.rho > -1.0 && m.rho < 1.0)) {
        std::ostringstream os;
        os << "rho = " << m.rho << " must lie in the open interval (-1, 1)";
        out.push_back({ViolationKind::domain, "rho", os.str()});
    }
    if (!std::isfinite(m.r)) out.push_back({ViolationKind::domain, "r", "r must be finite"});

    if (m.kappa > 0.0 && m.vbar > 0.0 && m.sigma > 0.0) {
        const double lhs = 2.0 * m.kappa * m.vbar;
        const double rhs = m.sigma * m.sigma;
        if (lhs < rhs * (1.0 - kFellerRelTol)) {
            std::ostringstream os;
            os << "Feller condition 2*kappa*vbar = " << lhs << " >= sigma^2 = " << rhs
               << " fails";
            out.push_back({ViolationKind::feller, "sigma", os.str()});
        }
    }

    const auto& h = bundle.hawkes;
    require_positive(out, "lambda0", h.lambda0);
    require_positive(out, "beta", h.beta);
    if (!(h.alpha >= 0.0) || !std::isfinite(h.alpha)) {
        out.push_back({ViolationKind::domain, "alpha", "alpha must be finite and >= 0"});
    } else if (h.beta > 0.0 && !(h.alpha / h.beta < 1.0)) {
        std::ostringstream os;
        os << "stability alpha/beta = " << h.alpha / h.beta << " must be < 1";
        out.push_back({ViolationKind::stability, "alpha", os.str()});
    }

    std::visit(
        [&out](const auto& law) {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, ExponentialJumps>) {
                require_positive(out, "jump_law.rate", law.rate);
            } else if constexpr (std::is_same_v<T, GammaJumps>) {
                require_positive(out, "jump_law.shape", law.shape);
                require_positive(out, "jump_law.rate", law.rate);
            } else {
                require_positive(out, "jump_law.value", law.value);
            }
        },
        bundle.law);
    return out;
}

ModelBundle validate(ModelBundle bundle) {
    auto violations = check(bundle);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return bundle;
}

}  // namespace hhsv
