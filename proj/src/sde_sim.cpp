#include "hhsv/sde_sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace hhsv {

namespace {

struct Partition {
    std::vector<double> times;
    std::vector<double> jumps;
    std::vector<std::size_t> grid_nodes;
    std::vector<std::size_t> event_nodes;
};

Partition merge_partition(const TimeGrid& grid, const MarkedPointPath& marked, double eta) {
    if (grid.t_start() != 0.0) throw std::invalid_argument("variance grid must start at t = 0");
    Partition part;
    const std::size_t n_grid = grid.size();
    std::size_t n_events = 0;
    while (n_events < marked.size() && marked.event_times[n_events] <= grid.t_end()) ++n_events;
    part.times.reserve(n_grid + n_events);
    part.jumps.reserve(n_grid + n_events);
    part.grid_nodes.reserve(n_grid);
    part.event_nodes.reserve(n_events);

    std::size_t gi = 0;
    std::size_t ei = 0;
    while (gi < n_grid || ei < n_events) {
        const double tg = gi < n_grid ? grid.at(gi) : INFINITY;
        const double te = ei < n_events ? marked.event_times[ei] : INFINITY;
        const double t = std::min(tg, te);
        part.times.push_back(t);
        part.jumps.push_back(0.0);
        const std::size_t node = part.times.size() - 1;
        if (tg == t) {
            part.grid_nodes.push_back(node);
            ++gi;
        }
        while (ei < n_events && marked.event_times[ei] == t) {
            part.jumps.back() += eta * marked.marks[ei];
            part.event_nodes.push_back(node);
            ++ei;
        }
    }
    return part;
}

VariancePath empty_path(const TimeGrid& grid, Partition part, VarianceScheme scheme,
                        const CirCoefficients& cir, double eta) {
    VariancePath path;
    path.grid = grid;
    const std::size_t n = part.times.size();
    path.times = std::move(part.times);
    path.jumps = std::move(part.jumps);
    path.grid_nodes = std::move(part.grid_nodes);
    path.event_nodes = std::move(part.event_nodes);
    path.values.resize(n);
    path.left_values.resize(n);
    path.integrated_variance.resize(n - 1);
    path.brownian_integral.resize(n - 1);
    path.scheme = scheme;
    path.coefficients = cir;
    path.eta = eta;
    return path;
}

void require_cir(const CirCoefficients& cir) {
    if (!(cir.kappa > 0.0 && cir.vbar > 0.0 && cir.sigma > 0.0)) {
        throw std::invalid_argument("CIR coefficients must be positive");
    }
}

// One Euler step from the state `raw` (v^+ is what the path stores); updates `raw` and
// returns the stored left limit at the end of the interval.
double euler_step(VariancePath& path, std::size_t k, double dt, double dw, double& raw) {
    const auto& cir = path.coefficients;
    const double vp = std::max(raw, 0.0);
    path.integrated_variance[k] = vp * dt;
    path.brownian_integral[k] = std::sqrt(vp) * dw;
    if (path.scheme == VarianceScheme::implicit_sqrt_euler) {
        const double q = std::sqrt(vp) + 0.5 * cir.sigma * dw;
        const double denom = 2.0 + cir.kappa * dt;
        const double c = denom * (4.0 * cir.kappa * cir.vbar - cir.sigma * cir.sigma) * dt / 4.0;
        const double y = (q + std::sqrt(q * q + c)) / denom;
        raw = y * y;
    } else {
        raw = raw - cir.kappa * (vp - cir.vbar) * dt + cir.sigma * std::sqrt(vp) * dw;
    }
    return std::max(raw, 0.0);
}

void require_implicit(const CirCoefficients& cir) {
    if (!(4.0 * cir.kappa * cir.vbar > cir.sigma * cir.sigma)) {
        throw std::invalid_argument("implicit sqrt Euler needs 4 kappa vbar > sigma^2");
    }
}

void close_node(VariancePath& path, std::size_t k, double left) {
    path.left_values[k + 1] = left;
    path.values[k + 1] = left + path.jumps[k + 1];
}

}  // namespace

const char* to_string(VarianceScheme scheme) {
    switch (scheme) {
        case VarianceScheme::exact_transition: return "exact-transition";
        case VarianceScheme::euler_full_truncation: return "euler-full-truncation";
        case VarianceScheme::implicit_sqrt_euler: return "implicit-sqrt-euler";
    }
    return "unknown";
}

double VariancePath::integrated_variance_total() const {
    double total = 0.0;
    for (double x : integrated_variance) total += x;
    return total;
}

double cir_transition(double v_start, double dt, double kappa, double vbar, double sigma,
                      RngStream& stream) {
    if (!(dt > 0.0)) throw std::invalid_argument("cir_transition needs dt > 0");
    const double one_minus_decay = -std::expm1(-kappa * dt);
    const double scale = sigma * sigma * one_minus_decay / (4.0 * kappa);
    const double delta = 4.0 * kappa * vbar / (sigma * sigma);
    const double noncentrality = v_start * std::exp(-kappa * dt) / scale;
    double x;
    if (delta > 1.0) {
        const double z = stream.gaussian() + std::sqrt(noncentrality);
        x = z * z + stream.chi_squared(delta - 1.0);
    } else {
        const auto n = stream.poisson(0.5 * noncentrality);
        x = stream.chi_squared(delta + 2.0 * static_cast<double>(n));
    }
    return scale * x;
}

VariancePath simulate_variance(const ModelParams& model, const MarkedPointPath& marked,
                               const TimeGrid& grid, VarianceScheme scheme, RngStream& stream) {
    return simulate_variance(CirCoefficients{model.kappa, model.vbar, model.sigma}, model.v0,
                             model.eta, marked, grid, scheme, stream);
}

VariancePath simulate_variance(const CirCoefficients& cir, double v0, double eta,
                               const MarkedPointPath& marked, const TimeGrid& grid,
                               VarianceScheme scheme, RngStream& stream) {
    require_cir(cir);
    if (!(v0 > 0.0)) throw std::invalid_argument("v0 must be > 0");
    VariancePath path = empty_path(grid, merge_partition(grid, marked, eta), scheme, cir, eta);
    if (scheme == VarianceScheme::implicit_sqrt_euler) require_implicit(cir);
    path.values[0] = v0 + path.jumps[0];
    path.left_values[0] = v0;
    double raw = path.values[0];

    for (std::size_t k = 0; k + 1 < path.nodes(); ++k) {
        const double dt = path.times[k + 1] - path.times[k];
        const double vs = path.values[k];
        double left;
        if (scheme == VarianceScheme::exact_transition) {
            left = cir_transition(vs, dt, cir.kappa, cir.vbar, cir.sigma, stream);
            if (!(left > 0.0)) {
                std::ostringstream os;
                os << "exact CIR transition produced v = " << left << " at t = " << path.times[k + 1];
                throw PositivityViolated(os.str());
            }
            const double integrated = 0.5 * (vs + left) * dt;
            path.integrated_variance[k] = integrated;
            // int sqrt(v) dW recovered from the integrated SDE between the two nodes
            path.brownian_integral[k] =
                (left - vs + cir.kappa * (integrated - cir.vbar * dt)) / cir.sigma;
        } else {
            left = euler_step(path, k, dt, std::sqrt(dt) * stream.gaussian(), raw);
            raw += path.jumps[k + 1];
        }
        close_node(path, k, left);
    }
    return path;
}

ComparisonPair simulate_comparison_pair(const ModelParams& model, const HawkesParams& hawkes,
                                        const JumpLaw& law, const TimeGrid& grid,
                                        RngStream& stream, VarianceScheme scheme) {
    if (scheme == VarianceScheme::exact_transition) {
        throw std::invalid_argument("the coupled pair needs an Euler scheme");
    }
    ComparisonPair pair;
    pair.marked = simulate_hawkes(hawkes, law, grid.t_end(), stream);
    const CirCoefficients cir{model.kappa, model.vbar, model.sigma};
    require_cir(cir);
    if (scheme == VarianceScheme::implicit_sqrt_euler) require_implicit(cir);

    pair.full = empty_path(grid, merge_partition(grid, pair.marked, model.eta), scheme, cir,
                           model.eta);
    pair.jump_free = empty_path(grid, merge_partition(grid, pair.marked, 0.0), scheme, cir, 0.0);
    auto& v = pair.full;
    auto& w = pair.jump_free;
    v.values[0] = model.v0 + v.jumps[0];
    v.left_values[0] = model.v0;
    w.values[0] = w.left_values[0] = model.v0;
    double v_raw = v.values[0];
    double w_raw = w.values[0];
    for (std::size_t k = 0; k + 1 < v.nodes(); ++k) {
        const double dt = v.times[k + 1] - v.times[k];
        const double dw = std::sqrt(dt) * stream.gaussian();
        close_node(v, k, euler_step(v, k, dt, dw, v_raw));
        v_raw += v.jumps[k + 1];
        close_node(w, k, euler_step(w, k, dt, dw, w_raw));
    }
    return pair;
}

double StockPath::price_at_grid(std::size_t i) const { return std::exp(log_prices[i]); }

StockPath simulate_stock(const ModelParams& model, const VariancePath& v_path,
                         const TimeGrid& grid, const std::optional<MeasureSpec>& measure,
                         RngStream& stream) {
    const TimeGrid& fine = v_path.grid;
    if (grid.t_start() != fine.t_start() || grid.t_end() != fine.t_end() ||
        fine.n_steps() % grid.n_steps() != 0) {
        throw std::invalid_argument("stock grid must be coarsened from the variance grid");
    }
    auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); };
    if (measure) {
        if (!close(v_path.coefficients.kappa, measure->kappa_a) ||
            !close(v_path.coefficients.vbar, measure->vbar_a)) {
            throw std::invalid_argument("variance path was not simulated with the Q(a) coefficients");
        }
    } else if (!close(v_path.coefficients.kappa, model.kappa) ||
               !close(v_path.coefficients.vbar, model.vbar)) {
        throw std::invalid_argument("variance path was not simulated with the P coefficients");
    }

    const std::size_t stride = fine.n_steps() / grid.n_steps();
    const double rho = model.rho;
    const double rho_c = std::sqrt(1.0 - rho * rho);

    StockPath out;
    out.grid = grid;
    out.measure = measure;
    out.log_prices.resize(grid.size());
    out.b_increments.resize(v_path.nodes() - 1);

    double log_s = std::log(model.s0);
    out.log_prices[0] = log_s;
    std::size_t next_grid = 1;
    for (std::size_t k = 0; k + 1 < v_path.nodes(); ++k) {
        const double t0 = v_path.times[k];
        const double t1 = v_path.times[k + 1];
        const double dt = t1 - t0;
        const double v = v_path.values[k];
        const double db = std::sqrt(dt) * stream.gaussian();
        out.b_increments[k] = db;
        const double drift = measure ? model.r * dt : model.mu.integral(t0, t1);
        log_s += drift - 0.5 * (1.0 - rho * rho) * v * dt - 0.5 * rho * rho * v_path.integrated_variance[k] +
                 rho_c * std::sqrt(v) * db + rho * v_path.brownian_integral[k];
        while (next_grid < grid.size() && v_path.grid_nodes[next_grid * stride] == k + 1) {
            out.log_prices[next_grid++] = log_s;
        }
    }
    return out;
}

void write_path_csv_header(std::ostream& os) { os << "path_id,t,v,logS,lambda,N,L\n"; }

void write_path_csv_rows(std::ostream& os, std::size_t path_id, const MarkedPointPath& marked,
                         const VariancePath& v_path, const StockPath& stock) {
    if (!(stock.grid == v_path.grid)) {
        throw std::invalid_argument("path dump needs the stock and variance on the same grid");
    }
    const auto old_precision = os.precision(15);
    for (std::size_t i = 0; i < v_path.grid.size(); ++i) {
        const double t = v_path.grid.at(i);
        os << path_id << ',' << t << ',' << v_path.value_at_grid(i) << ',' << stock.log_prices[i]
           << ',' << intensity_at(marked, t) << ',' << marked.count_at(t) << ','
           << marked.compound_at(t) << '\n';
    }
    os.precision(old_precision);
}

}  // namespace hhsv
