#include "hhsv/measures.hpp"

#include <cmath>
#include <sstream>

namespace hhsv {

const char* to_string(Admissibility a) {
    switch (a) {
        case Admissibility::emm: return "EMM";
        case Admissibility::elmm: return "ELMM";
        case Admissibility::inadmissible: return "inadmissible";
    }
    return "inadmissible";
}

double theta(const ModelParams& model, double a, double mu_t, double v) {
    if (!(v > 0.0)) {
        std::ostringstream os;
        os << "theta needs v > 0, got " << v;
        throw NonpositiveVariance(os.str());
    }
    const double sv = std::sqrt(v);
    return ((mu_t - model.r) / sv - a * model.rho * sv) / std::sqrt(1.0 - model.rho * model.rho);
}

double elmm_bound(double c_l) { return std::sqrt(2.0 * c_l); }

double emm_bound(double c_l, double rho) {
    if (!(rho * rho < c_l)) return 0.0;
    return std::min(std::sqrt(2.0 * c_l) / 2.0, std::sqrt(c_l - rho * rho));
}

Admissibility classify(double a, double c_l, double rho) {
    if (!(c_l > 0.0)) throw std::invalid_argument("classify needs c_l > 0");
    const double abs_a = std::abs(a);
    if (rho * rho < c_l && abs_a < emm_bound(c_l, rho)) return Admissibility::emm;
    if (abs_a < elmm_bound(c_l)) return Admissibility::elmm;
    return Admissibility::inadmissible;
}

MeasureSpec make_measure(const ModelParams& model, double a, double c_l) {
    MeasureSpec spec;
    spec.a = a;
    spec.classification = classify(a, c_l, model.rho);
    spec.kappa_a = model.kappa + a * model.sigma;
    spec.vbar_a = model.kappa * model.vbar / spec.kappa_a;
    spec.c_l = c_l;
    return spec;
}

CirCoefficients q_coefficients(const ModelParams& model, const MeasureSpec& spec) {
    if (!(spec.kappa_a > 0.0)) {
        std::ostringstream os;
        os << "kappa + a sigma = " << spec.kappa_a << " <= 0: no mean-reverting Q(a) variance";
        throw std::domain_error(os.str());
    }
    return {spec.kappa_a, spec.vbar_a, model.sigma};
}

DensityFactors density_factors(const ModelParams& model, double a, const VariancePath& v_path,
                               const StockPath& stock) {
    if (v_path.scheme != VarianceScheme::exact_transition) {
        throw std::invalid_argument("density factors need an exact-transition variance path");
    }
    if (stock.b_increments.size() + 1 != v_path.nodes() || stock.measure) {
        throw std::invalid_argument("density factors need the P stock path of this variance path");
    }
    double log_y = 0.0;
    double log_z = 0.0;
    for (std::size_t k = 0; k + 1 < v_path.nodes(); ++k) {
        const double v = v_path.values[k];
        if (!(v > kDensityVarianceFloor)) {
            std::ostringstream os;
            os << "variance " << v << " at t = " << v_path.times[k] << " is below the density floor";
            throw NonpositiveVariance(os.str());
        }
        const double t0 = v_path.times[k];
        const double dt = v_path.times[k + 1] - t0;
        const double mu_bar = model.mu.integral(t0, v_path.times[k + 1]) / dt;
        const double th = theta(model, a, mu_bar, v);
        log_y += -th * stock.b_increments[k] - 0.5 * th * th * dt;
        log_z += -a * v_path.brownian_integral[k] - 0.5 * a * a * v_path.integrated_variance[k];
    }
    const double y = std::exp(log_y);
    const double z = std::exp(log_z);
    return {y, z, y * z};
}

PhysicalPath simulate_physical_path(const ModelBundle& bundle, const TimeGrid& grid,
                                    std::uint64_t seed, std::size_t path_index) {
    RngStream hawkes_stream(seed, path_index, StreamPurpose::hawkes);
    RngStream variance_stream(seed, path_index, StreamPurpose::variance);
    RngStream stock_stream(seed, path_index, StreamPurpose::stock);
    PhysicalPath p;
    p.marked = simulate_hawkes(bundle.hawkes, bundle.law, bundle.model.horizon, hawkes_stream);
    p.variance = simulate_variance(bundle.model, p.marked, grid, VarianceScheme::exact_transition,
                                   variance_stream);
    p.stock = simulate_stock(bundle.model, p.variance, grid, std::nullopt, stock_stream);
    return p;
}

double simulate_q_discounted_terminal(const ModelBundle& bundle, const MeasureSpec& spec,
                                      const TimeGrid& grid, std::uint64_t seed,
                                      std::size_t path_index) {
    const auto cir = q_coefficients(bundle.model, spec);
    RngStream hawkes_stream(seed, path_index, StreamPurpose::q_hawkes);
    RngStream variance_stream(seed, path_index, StreamPurpose::q_variance);
    RngStream stock_stream(seed, path_index, StreamPurpose::q_stock);
    // the compound Hawkes law is the same under Q(a)
    const auto marked = simulate_hawkes(bundle.hawkes, bundle.law, bundle.model.horizon, hawkes_stream);
    const auto v = simulate_variance(cir, bundle.model.v0, bundle.model.eta, marked, grid,
                                     VarianceScheme::exact_transition, variance_stream);
    const auto stock = simulate_stock(bundle.model, v, grid, spec, stock_stream);
    return std::exp(-bundle.model.r * bundle.model.horizon) * stock.price_at_grid(grid.n_steps());
}

std::vector<MartingaleCheck> martingale_check(const ModelBundle& bundle,
                                              const std::vector<double>& a_values, double c_l,
                                              std::size_t n_paths, const TimeGrid& grid,
                                              std::uint64_t seed, unsigned workers) {
    const std::size_t n_a = a_values.size();
    std::vector<std::vector<double>> xs(n_a, std::vector<double>(n_paths));
    std::vector<std::vector<double>> zs(n_a, std::vector<double>(n_paths));
    parallel_paths(n_paths, workers, [&](std::size_t i) {
        const auto p = simulate_physical_path(bundle, grid, seed, i);
        for (std::size_t j = 0; j < n_a; ++j) {
            const auto d = density_factors(bundle.model, a_values[j], p.variance, p.stock);
            xs[j][i] = d.x;
            zs[j][i] = d.z;
        }
    });
    std::vector<MartingaleCheck> out;
    for (std::size_t j = 0; j < n_a; ++j) {
        const double a = a_values[j];
        std::ostringstream label;
        label.precision(6);
        label << "a=" << a;
        out.push_back({a, classify(a, c_l, bundle.model.rho),
                       two_sided_report("E[X_T] " + label.str(), summarize(xs[j]), 1.0),
                       two_sided_report("E[Z_T] " + label.str(), summarize(zs[j]), 1.0)});
    }
    return out;
}

bool EmmCheck::pass() const {
    if (direct && !direct->pass) return false;
    if (agreement && !agreement->pass) return false;
    return weighted.pass;
}

EmmCheck emm_check_direct(const ModelBundle& bundle, double a, double c_l, std::size_t n_paths,
                          const TimeGrid& grid, std::uint64_t seed, unsigned workers) {
    const MeasureSpec spec = make_measure(bundle.model, a, c_l);
    if (spec.classification != Admissibility::emm) {
        std::ostringstream os;
        os << "a = " << a << " is classified " << to_string(spec.classification)
           << ", not EMM (bound " << emm_bound(c_l, bundle.model.rho) << ")";
        throw std::invalid_argument(os.str());
    }
    const double s0 = bundle.model.s0;
    const double discount = std::exp(-bundle.model.r * bundle.model.horizon);
    std::ostringstream label;
    label.precision(6);
    label << "a=" << a;

    EmmCheck out{a, spec.classification, std::nullopt, {}, std::nullopt};

    std::vector<double> weighted(n_paths);
    parallel_paths(n_paths, workers, [&](std::size_t i) {
        const auto p = simulate_physical_path(bundle, grid, seed, i);
        const auto d = density_factors(bundle.model, a, p.variance, p.stock);
        weighted[i] = d.x * discount * p.stock.price_at_grid(grid.n_steps());
    });
    const auto weighted_summary = summarize(weighted);
    out.weighted = two_sided_report("E_P[X_T e^-rT S_T] " + label.str(), weighted_summary, s0);

    if (spec.kappa_a > 0.0) {
        std::vector<double> direct(n_paths);
        parallel_paths(n_paths, workers, [&](std::size_t i) {
            direct[i] = simulate_q_discounted_terminal(bundle, spec, grid, seed, i);
        });
        const auto direct_summary = summarize(direct);
        out.direct = two_sided_report("E_Q[e^-rT S_T] " + label.str(), direct_summary, s0);
        out.agreement = agreement_report("direct - weighted " + label.str(), direct_summary,
                                         weighted_summary);
    }
    return out;
}

}  // namespace hhsv
