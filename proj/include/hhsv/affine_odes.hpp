#pragma once

#include <stdexcept>
#include <vector>

#include "hhsv/model.hpp"

namespace hhsv {

/// Raised when h(s) = H(T - s) leaves [-1/beta, x_p] beyond the tolerance.
class BracketViolated : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Riccati cap kappa^2 / (2 sigma^2); D(c) is real only below it.
double riccati_cap(const ModelParams& model);

/// D(c) = sqrt(kappa^2 - 2 sigma^2 c).
double d_of_c(const ModelParams& model, double c);

/// Closed-form G at time t for exponent c (terminal condition G(T) = 0).
double riccati_g(const ModelParams& model, double c, double t);

/// Lambda(c) = eta G(0).
double big_lambda(const ModelParams& model, double c);

/// (beta/alpha) exp(alpha/beta - 1); +inf when alpha = 0.
double hawkes_threshold(const HawkesParams& hawkes);

/// Lambda(c) < epsilon_J and M_J(Lambda(c)) <= hawkes_threshold.
bool c_feasible(const ModelBundle& bundle, double c);

/// Constants attached to one exponent c.
struct OdeContext {
    double c;
    double d;         // D(c)
    double lambda_c;  // Lambda(c)
    double u;         // sup_t M_J(eta G(t))
    double x_p;       // upper bracket for h
};

OdeContext make_context(const ModelBundle& bundle, double c);

std::vector<double> solve_g(const ModelBundle& bundle, double c, const TimeGrid& grid);

/// Integrates h'(s) = M_J(eta G(T-s)) e^{alpha h} - beta h - 1, h(0) = 0, with classical RK4
/// on the grid and returns H(t_i) = h(T - t_i). G is evaluated in closed form at the stages.
std::vector<double> solve_h(const ModelBundle& bundle, double c, const TimeGrid& grid,
                            double bracket_tol = 1e-9);

/// F(t) = int_t^T (kappa vbar G + beta lambda0 H) ds by composite Simpson on the grid.
std::vector<double> solve_f(const ModelBundle& bundle, const TimeGrid& grid,
                            const std::vector<double>& g, const std::vector<double>& h);

struct OdeSolution {
    TimeGrid grid{0.0, 1.0, 2};
    OdeContext context{};
    std::vector<double> g;
    std::vector<double> h;
    std::vector<double> f;
    double bound_m0 = 1.0;  // exp(F(0) + G(0) v0 + H(0) lambda0)
};

/// Solves G, H, F on [0, T]. The grid must span [0, model.horizon].
OdeSolution solve_odes(const ModelBundle& bundle, double c, const TimeGrid& grid);

/// Upper bound for E[exp(c int_0^T v du)].
double supermartingale_bound(const ModelBundle& bundle, double c, const TimeGrid& grid);

/// Explicit lower estimate of c_l.
double compute_c_s(const ModelBundle& bundle);

/// Supremum of the feasible exponents, located by a geometric scan and bisection to
/// absolute tolerance `tol`. Throws if Lambda is not monotone on the scan or the feasible
/// set is not an interval.
double compute_c_l(const ModelBundle& bundle, double tol = 1e-10);

}  // namespace hhsv
