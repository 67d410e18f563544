#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hhsv/measure_spec.hpp"
#include "hhsv/model.hpp"
#include "hhsv/sde_sim.hpp"
#include "hhsv/statistics.hpp"

namespace hhsv {

class NonpositiveVariance : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Nodes with v at or below this level are rejected by the density computations.
inline constexpr double kDensityVarianceFloor = 1e-12;

/// Market price of risk for B: ((mu_t - r)/sqrt(v) - a rho sqrt(v)) / sqrt(1 - rho^2).
double theta(const ModelParams& model, double a, double mu_t, double v);

/// sqrt(2 c_l): the local-martingale range for |a|.
double elmm_bound(double c_l);

/// min{sqrt(2 c_l)/2, sqrt(c_l - rho^2)}, or 0 when rho^2 >= c_l.
double emm_bound(double c_l, double rho);

Admissibility classify(double a, double c_l, double rho);

MeasureSpec make_measure(const ModelParams& model, double a, double c_l);

/// CIR coefficients of v under Q(a). Throws when kappa_a <= 0.
CirCoefficients q_coefficients(const ModelParams& model, const MeasureSpec& spec);

struct DensityFactors {
    double y;
    double z;
    double x;  // y * z, the density dQ(a)/dP on the path
};

/// Left-endpoint Ito sums of the Girsanov exponents along one P-path. The variance path must
/// come from the exact-transition scheme.
DensityFactors density_factors(const ModelParams& model, double a, const VariancePath& v_path,
                               const StockPath& stock);

/// One path under P: marks, variance (exact transitions) and stock.
struct PhysicalPath {
    MarkedPointPath marked;
    VariancePath variance;
    StockPath stock;
};

PhysicalPath simulate_physical_path(const ModelBundle& bundle, const TimeGrid& grid,
                                    std::uint64_t seed, std::size_t path_index);

/// Discounted terminal price e^{-rT} S_T of one path simulated directly under Q(a).
double simulate_q_discounted_terminal(const ModelBundle& bundle, const MeasureSpec& spec,
                                      const TimeGrid& grid, std::uint64_t seed,
                                      std::size_t path_index);

struct MartingaleCheck {
    double a;
    Admissibility classification;
    McReport x;  // E[X_T] against 1
    McReport z;  // E[Z_T] against 1
};

/// E[X_T^(a)] and E[Z_T^(a)] for each a, all from the same P-paths.
std::vector<MartingaleCheck> martingale_check(const ModelBundle& bundle,
                                              const std::vector<double>& a_values, double c_l,
                                              std::size_t n_paths, const TimeGrid& grid,
                                              std::uint64_t seed, unsigned workers = 1);

struct EmmCheck {
    double a;
    Admissibility classification;
    std::optional<McReport> direct;  // absent when kappa_a <= 0
    McReport weighted;               // E_P[X_T e^{-rT} S_T] against s0
    std::optional<McReport> agreement;
    bool pass() const;
};

/// E^{Q(a)}[e^{-rT} S_T] against s0 by direct Q-simulation, cross-checked by the
/// importance-weighted P estimator. Requires classify(a) == emm.
EmmCheck emm_check_direct(const ModelBundle& bundle, double a, double c_l, std::size_t n_paths,
                          const TimeGrid& grid, std::uint64_t seed, unsigned workers = 1);

}  // namespace hhsv
