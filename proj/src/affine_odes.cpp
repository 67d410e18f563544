#include "hhsv/affine_odes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hhsv/jump_mgf.hpp"

namespace hhsv {

namespace {

constexpr double kSeriesSwitch = 1e-6;

// G as a function of the time to maturity tau = T - t.
double g_of_tau(const ModelParams& m, double c, double d, double tau) {
    if (d * tau < kSeriesSwitch) {
        return 2.0 * c * tau / (2.0 + m.kappa * tau);
    }
    // D - kappa + (D + kappa) e^{D tau} rewritten as 2D + (D + kappa)(e^{D tau} - 1)
    const double x = std::expm1(d * tau);
    return 2.0 * c * x / (2.0 * d + (d + m.kappa) * x);
}

void require_below_cap(const ModelParams& m, double c) {
    if (c > riccati_cap(m)) {
        std::ostringstream os;
        os << "c = " << c << " exceeds kappa^2/(2 sigma^2) = " << riccati_cap(m);
        throw std::domain_error(os.str());
    }
}

void require_feasible(const ModelBundle& bundle, double c) {
    if (!c_feasible(bundle, c)) {
        std::ostringstream os;
        os << "c = " << c << " is not below c_l: the H equation has no bracketed solution";
        throw std::domain_error(os.str());
    }
}

void require_ode_grid(const ModelBundle& bundle, const TimeGrid& grid) {
    if (grid.t_start() != 0.0 || grid.t_end() != bundle.model.horizon) {
        throw std::invalid_argument("ODE grid must span [0, T]");
    }
}

}  // namespace

double riccati_cap(const ModelParams& model) {
    return model.kappa * model.kappa / (2.0 * model.sigma * model.sigma);
}

double d_of_c(const ModelParams& model, double c) {
    require_below_cap(model, c);
    return std::sqrt(std::max(model.kappa * model.kappa - 2.0 * model.sigma * model.sigma * c, 0.0));
}

double riccati_g(const ModelParams& model, double c, double t) {
    return g_of_tau(model, c, d_of_c(model, c), model.horizon - t);
}

double big_lambda(const ModelParams& model, double c) {
    return model.eta * riccati_g(model, c, 0.0);
}

double hawkes_threshold(const HawkesParams& hawkes) {
    if (hawkes.alpha == 0.0) return kInfinity;
    const double ratio = hawkes.alpha / hawkes.beta;
    return std::exp(ratio - 1.0) / ratio;
}

bool c_feasible(const ModelBundle& bundle, double c) {
    if (c > riccati_cap(bundle.model)) return false;
    const double lambda_c = big_lambda(bundle.model, c);
    if (!(lambda_c < mgf_domain_edge(bundle.law))) return false;
    return mgf(bundle.law, lambda_c) <= hawkes_threshold(bundle.hawkes);
}

OdeContext make_context(const ModelBundle& bundle, double c) {
    const auto& m = bundle.model;
    const auto& hk = bundle.hawkes;
    OdeContext ctx{};
    ctx.c = c;
    ctx.d = d_of_c(m, c);
    ctx.lambda_c = m.eta * g_of_tau(m, c, ctx.d, m.horizon);
    // G is monotone with G(T) = 0, so the sup of M_J(eta G) sits at t = 0 for c > 0 and at
    // t = T otherwise.
    ctx.u = mgf(bundle.law, std::max(ctx.lambda_c, 0.0));
    if (hk.alpha > 0.0) {
        ctx.x_p = std::log(hk.beta / (hk.alpha * ctx.u)) / hk.alpha;
    } else {
        ctx.x_p = (ctx.u - 1.0) / hk.beta;
    }
    return ctx;
}

std::vector<double> solve_g(const ModelBundle& bundle, double c, const TimeGrid& grid) {
    require_feasible(bundle, c);
    const auto& m = bundle.model;
    const double d = d_of_c(m, c);
    std::vector<double> g(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        g[i] = g_of_tau(m, c, d, m.horizon - grid.at(i));
    }
    g.back() = 0.0;
    return g;
}

std::vector<double> solve_h(const ModelBundle& bundle, double c, const TimeGrid& grid,
                            double bracket_tol) {
    require_ode_grid(bundle, grid);
    require_feasible(bundle, c);
    const auto& m = bundle.model;
    const auto& hk = bundle.hawkes;
    const OdeContext ctx = make_context(bundle, c);

    auto rhs = [&](double s, double x) {
        const double jump_mgf = mgf(bundle.law, m.eta * g_of_tau(m, c, ctx.d, s));
        return jump_mgf * std::exp(hk.alpha * x) - hk.beta * x - 1.0;
    };

    const std::size_t n = grid.n_steps();
    const double step = grid.dt();
    const double lower = -1.0 / hk.beta - bracket_tol;
    const double upper = ctx.x_p + bracket_tol;

    std::vector<double> out(grid.size());
    double x = 0.0;
    out[n] = x;
    for (std::size_t j = 0; j < n; ++j) {
        const double s = static_cast<double>(j) * step;
        const double k1 = rhs(s, x);
        const double k2 = rhs(s + 0.5 * step, x + 0.5 * step * k1);
        const double k3 = rhs(s + 0.5 * step, x + 0.5 * step * k2);
        const double k4 = rhs(s + step, x + step * k3);
        x += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!(x >= lower && x <= upper)) {
            std::ostringstream os;
            os << "h left [" << -1.0 / hk.beta << ", " << ctx.x_p << "] with h = " << x
               << " at s = " << s + step << " (c = " << c << ")";
            throw BracketViolated(os.str());
        }
        out[n - j - 1] = x;
    }
    return out;
}

std::vector<double> solve_f(const ModelBundle& bundle, const TimeGrid& grid,
                            const std::vector<double>& g, const std::vector<double>& h) {
    if (g.size() != grid.size() || h.size() != grid.size()) {
        throw std::invalid_argument("solve_f: G and H must be sampled on the grid");
    }
    const std::size_t n = grid.n_steps();
    if (n < 2) throw std::invalid_argument("solve_f needs at least two steps");
    const auto& m = bundle.model;
    const double step = grid.dt();
    std::vector<double> q(grid.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        q[i] = m.kappa * m.vbar * g[i] + bundle.hawkes.beta * bundle.hawkes.lambda0 * h[i];
    }

    std::vector<double> f(grid.size(), 0.0);
    for (std::size_t back = 1; back <= n; ++back) {
        const std::size_t i = n - back;
        if (back % 2 == 0) {
            f[i] = f[i + 2] + step / 3.0 * (q[i] + 4.0 * q[i + 1] + q[i + 2]);
        } else if (i + 2 <= n) {
            // single interval from the quadratic through three nodes
            f[i] = f[i + 1] + step / 12.0 * (5.0 * q[i] + 8.0 * q[i + 1] - q[i + 2]);
        } else {
            f[i] = f[i + 1] + step / 12.0 * (-q[i - 1] + 8.0 * q[i] + 5.0 * q[i + 1]);
        }
    }
    return f;
}

OdeSolution solve_odes(const ModelBundle& bundle, double c, const TimeGrid& grid) {
    require_ode_grid(bundle, grid);
    OdeSolution sol;
    sol.grid = grid;
    sol.context = make_context(bundle, c);
    sol.g = solve_g(bundle, c, grid);
    sol.h = solve_h(bundle, c, grid);
    sol.f = solve_f(bundle, grid, sol.g, sol.h);
    sol.bound_m0 = std::exp(sol.f[0] + sol.g[0] * bundle.model.v0 + sol.h[0] * bundle.hawkes.lambda0);
    return sol;
}

double supermartingale_bound(const ModelBundle& bundle, double c, const TimeGrid& grid) {
    return solve_odes(bundle, c, grid).bound_m0;
}

double compute_c_s(const ModelBundle& bundle) {
    const auto& m = bundle.model;
    const double edge = mgf_domain_edge(bundle.law);
    const double scale = m.kappa / (2.0 * m.eta);
    const double from_edge = scale * edge;
    const double from_threshold = scale * mgf_inverse(bundle.law, hawkes_threshold(bundle.hawkes));
    return std::min({from_edge, from_threshold, riccati_cap(m)});
}

double compute_c_l(const ModelBundle& bundle, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("compute_c_l needs tol > 0");
    const double cap = riccati_cap(bundle.model);

    constexpr std::size_t kScan = 512;
    constexpr double kDecades = 12.0;
    std::vector<double> cs(kScan);
    for (std::size_t k = 0; k < kScan; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(kScan - 1);
        cs[k] = cap * std::pow(10.0, -kDecades * (1.0 - frac));
    }
    cs.back() = cap;

    std::size_t first_infeasible = kScan;
    double previous_lambda = 0.0;
    for (std::size_t k = 0; k < kScan; ++k) {
        const double lambda_c = big_lambda(bundle.model, cs[k]);
        if (lambda_c < previous_lambda) {
            std::ostringstream os;
            os << "Lambda(c) decreases between c = " << cs[k - 1] << " and c = " << cs[k]
               << "; the feasible set may not be an interval";
            throw std::runtime_error(os.str());
        }
        previous_lambda = lambda_c;
        const bool ok = c_feasible(bundle, cs[k]);
        if (!ok && first_infeasible == kScan) {
            first_infeasible = k;
        } else if (ok && first_infeasible != kScan) {
            std::ostringstream os;
            os << "feasible set is not an interval: c = " << cs[k] << " is feasible above the"
               << " infeasible c = " << cs[first_infeasible];
            throw std::runtime_error(os.str());
        }
    }
    if (first_infeasible == kScan) return cap;

    double lo = first_infeasible == 0 ? 0.0 : cs[first_infeasible - 1];
    double hi = cs[first_infeasible];
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (c_feasible(bundle, mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

}  // namespace hhsv
