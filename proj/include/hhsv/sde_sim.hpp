#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hhsv/hawkes_sim.hpp"
#include "hhsv/measure_spec.hpp"
#include "hhsv/model.hpp"
#include "hhsv/rng.hpp"

namespace hhsv {

/// exact_transition: noncentral chi-square draws between nodes.
/// euler_full_truncation: explicit Euler on v with v^+ inside the drift and the square root.
/// implicit_sqrt_euler: drift-implicit Euler on sqrt(v); each step is increasing in the
/// starting value, so two paths sharing increments keep their order. Needs 4 kappa vbar > sigma^2.
enum class VarianceScheme { exact_transition, euler_full_truncation, implicit_sqrt_euler };

const char* to_string(VarianceScheme scheme);

class PositivityViolated : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Square-root diffusion coefficients dv = -kappa (v - vbar) dt + sigma sqrt(v) dW.
struct CirCoefficients {
    double kappa;
    double vbar;
    double sigma;
};

/// Variance on the merged partition grid U event times.
///
/// Node k carries the left limit `left_values[k]` and the càdlàg value `values[k]`; the two
/// differ only at event nodes, by eta times the marks landing there. Interval k is
/// [times[k], times[k+1]) and carries the integrated variance and the Brownian integral
/// int sqrt(v) dW the scheme used over it.
struct VariancePath {
    TimeGrid grid{0.0, 1.0, 1};
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> left_values;
    std::vector<double> jumps;
    std::vector<std::size_t> grid_nodes;   // node index of each grid point
    std::vector<std::size_t> event_nodes;  // node index of each event
    std::vector<double> integrated_variance;
    std::vector<double> brownian_integral;
    VarianceScheme scheme = VarianceScheme::exact_transition;
    CirCoefficients coefficients{0.0, 0.0, 0.0};
    double eta = 0.0;

    std::size_t nodes() const { return times.size(); }
    double value_at_grid(std::size_t i) const { return values[grid_nodes[i]]; }
    /// Trapezoid on the merged partition, using the left limit at the right end of each
    /// interval.
    double integrated_variance_total() const;
};

/// Exact draw of v_{t+dt} given v_t: scale * noncentral chi-square(delta, nc).
double cir_transition(double v_start, double dt, double kappa, double vbar, double sigma,
                      RngStream& stream);

/// Interlaces CIR transitions (or Euler steps) with jumps eta * J_i at the event times.
VariancePath simulate_variance(const ModelParams& model, const MarkedPointPath& marked,
                               const TimeGrid& grid, VarianceScheme scheme, RngStream& stream);

/// Same, with explicit CIR coefficients (used for the Q(a) dynamics).
VariancePath simulate_variance(const CirCoefficients& cir, double v0, double eta,
                               const MarkedPointPath& marked, const TimeGrid& grid,
                               VarianceScheme scheme, RngStream& stream);

/// Jump-free comparison process and the full variance, driven by the same Brownian
/// increments on the same partition. `scheme` must be one of the Euler schemes.
struct ComparisonPair {
    MarkedPointPath marked;
    VariancePath jump_free;
    VariancePath full;
};

ComparisonPair simulate_comparison_pair(const ModelParams& model, const HawkesParams& hawkes,
                                        const JumpLaw& law, const TimeGrid& grid,
                                        RngStream& stream,
                                        VarianceScheme scheme = VarianceScheme::implicit_sqrt_euler);

/// Log-price path on the grid. `b_increments[k]` is the B increment over merged interval k.
struct StockPath {
    TimeGrid grid{0.0, 1.0, 1};
    std::vector<double> log_prices;
    std::vector<double> b_increments;
    std::optional<MeasureSpec> measure;  // nullopt: physical measure P

    double price_at_grid(std::size_t i) const;
};

/// Log-Euler stock driven by the variance path's Brownian integrals and fresh B draws.
/// Drift is mu_t under P and r under Q(a).
StockPath simulate_stock(const ModelParams& model, const VariancePath& v_path,
                         const TimeGrid& grid, const std::optional<MeasureSpec>& measure,
                         RngStream& stream);

/// Long-format CSV "path_id,t,v,logS,lambda,N,L" on the grid points.
void write_path_csv_header(std::ostream& os);
void write_path_csv_rows(std::ostream& os, std::size_t path_id, const MarkedPointPath& marked,
                         const VariancePath& v_path, const StockPath& stock);

}  // namespace hhsv
