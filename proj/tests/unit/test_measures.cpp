#include <doctest.h>

#include <cmath>

#include "hhsv/affine_odes.hpp"
#include "hhsv/measures.hpp"
#include "oracles.hpp"

using namespace hhsv;

TEST_CASE("theta examples") {
    ModelParams m;
    m.r = 0.02;
    m.rho = -0.5;
    CHECK(theta(m, 0.0, 0.02, 0.04) == 0.0);

    m.rho = 0.0;
    CHECK(theta(m, 1.7, 0.04, 0.04) == doctest::Approx(0.1).epsilon(1e-15));

    CHECK_THROWS_AS(theta(m, 0.0, 0.05, 0.0), NonpositiveVariance);
    CHECK_THROWS_AS(theta(m, 0.0, 0.05, -1e-3), NonpositiveVariance);
}

TEST_CASE("theta removes the excess drift under Q(a)") {
    ModelParams m;
    for (double rho : {-0.9, -0.5, 0.0, 0.3, 0.8}) {
        m.rho = rho;
        for (double a : {-1.0, 0.0, 0.4, 2.5}) {
            for (double v : {1e-4, 0.04, 0.5}) {
                for (double mu : {-0.1, 0.02, 0.07}) {
                    const double th = theta(m, a, mu, v);
                    const double sv = std::sqrt(v);
                    const double q_drift = mu - sv * (rho * a * sv + std::sqrt(1 - rho * rho) * th);
                    CHECK(q_drift == doctest::Approx(m.r).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("classification examples") {
    const double c_l = 0.18;
    CHECK(elmm_bound(c_l) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(emm_bound(c_l, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(classify(0.29, c_l, 0.3) == Admissibility::emm);
    CHECK(classify(-0.29, c_l, 0.3) == Admissibility::emm);
    CHECK(classify(0.35, c_l, 0.3) == Admissibility::elmm);
    CHECK(classify(0.59, c_l, 0.3) == Admissibility::elmm);
    CHECK(classify(0.61, c_l, 0.3) == Admissibility::inadmissible);
    CHECK(classify(0.6, c_l, 0.3) == Admissibility::inadmissible);

    // rho^2 >= c_l leaves no EMM range
    CHECK(emm_bound(0.1, 0.5) == 0.0);
    CHECK(classify(0.01, 0.1, 0.5) == Admissibility::elmm);
    CHECK(classify(0.0, 0.25, 0.5) == Admissibility::elmm);

    // the sqrt(2 c_l)/2 branch
    CHECK(emm_bound(1.0, 0.1) == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));

    CHECK_THROWS_AS(classify(0.1, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("classification is monotone in |a|") {
    for (double rho : {0.0, -0.5, 0.7}) {
        for (double c_l : {0.1, 1.0, 7.7}) {
            int prev = 2;
            for (int k = 0; k <= 400; ++k) {
                const double a = 5.0 * k / 400.0;
                const int cur = static_cast<int>(classify(a, c_l, rho));
                CHECK(cur <= prev);
                CHECK(classify(-a, c_l, rho) == classify(a, c_l, rho));
                prev = cur;
            }
        }
    }
}

TEST_CASE("EMM range satisfies the Novikov-type condition") {
    for (double rho : {0.0, 0.3, -0.6}) {
        for (double c_l : {0.5, 2.0, 7.7566}) {
            const double b = emm_bound(c_l, rho);
            CHECK(b * b + rho * rho <= c_l * (1 + 1e-15));
            CHECK(b * b / 2 <= c_l / 4 * (1 + 1e-15));
        }
    }
}

TEST_CASE("Q(a) variance coefficients") {
    const auto bundle = default_bundle();
    const auto spec = make_measure(bundle.model, 1.0, 7.7566);
    CHECK(spec.kappa_a == doctest::Approx(2.3).epsilon(1e-15));
    CHECK(spec.vbar_a == doctest::Approx(0.08 / 2.3).epsilon(1e-15));
    CHECK(spec.kappa_a * spec.vbar_a == doctest::Approx(bundle.model.kappa * bundle.model.vbar).epsilon(1e-15));
    const auto cir = q_coefficients(bundle.model, spec);
    CHECK(cir.kappa == spec.kappa_a);
    CHECK(cir.vbar == spec.vbar_a);
    CHECK(cir.sigma == bundle.model.sigma);

    const auto bad = make_measure(bundle.model, -7.0, 7.7566);
    CHECK(bad.kappa_a < 0.0);
    CHECK_THROWS_AS(q_coefficients(bundle.model, bad), std::domain_error);
}

TEST_CASE("density is one when a = 0 and mu = r") {
    auto bundle = default_bundle();
    bundle.model.mu = DriftSchedule(bundle.model.r);
    const TimeGrid grid(0.0, 1.0, 50);
    for (std::size_t i = 0; i < 50; ++i) {
        const auto p = simulate_physical_path(bundle, grid, 3, i);
        const auto d = density_factors(bundle.model, 0.0, p.variance, p.stock);
        CHECK(d.x == 1.0);
        CHECK(d.y == 1.0);
        CHECK(d.z == 1.0);
    }
}

TEST_CASE("density factors are positive and multiply") {
    const auto bundle = default_bundle();
    const TimeGrid grid(0.0, 1.0, 50);
    for (std::size_t i = 0; i < 200; ++i) {
        const auto p = simulate_physical_path(bundle, grid, 9, i);
        const auto d = density_factors(bundle.model, 1.3, p.variance, p.stock);
        CHECK(d.x > 0.0);
        CHECK(d.x == doctest::Approx(d.y * d.z).epsilon(1e-15));
    }
}

TEST_CASE("density against an independent sum") {
    const auto bundle = default_bundle();
    const auto& m = bundle.model;
    const TimeGrid grid(0.0, 1.0, 20);
    const double a = 0.7;
    const auto p = simulate_physical_path(bundle, grid, 21, 4);
    const auto& v = p.variance;
    double ly = 0.0;
    double lz = 0.0;
    for (std::size_t k = 0; k + 1 < v.nodes(); ++k) {
        const double dt = v.times[k + 1] - v.times[k];
        const double sv = std::sqrt(v.values[k]);
        const double th = ((0.05 - m.r) / sv - a * m.rho * sv) / std::sqrt(1 - m.rho * m.rho);
        ly += -th * p.stock.b_increments[k] - th * th * dt / 2;
        lz += -a * v.brownian_integral[k] - a * a * v.integrated_variance[k] / 2;
    }
    const auto d = density_factors(m, a, v, p.stock);
    CHECK(d.y == doctest::Approx(std::exp(ly)).epsilon(1e-12));
    CHECK(d.z == doctest::Approx(std::exp(lz)).epsilon(1e-12));
}

TEST_CASE("density rejects non-exact variance paths") {
    const auto bundle = default_bundle();
    const TimeGrid grid(0.0, 1.0, 10);
    RngStream hs(1, 0, StreamPurpose::hawkes);
    RngStream vs(1, 0, StreamPurpose::variance);
    RngStream ss(1, 0, StreamPurpose::stock);
    const auto marked = simulate_hawkes(bundle.hawkes, bundle.law, 1.0, hs);
    const auto v = simulate_variance(bundle.model, marked, grid, VarianceScheme::euler_full_truncation, vs);
    const auto s = simulate_stock(bundle.model, v, grid, std::nullopt, ss);
    CHECK_THROWS_AS(density_factors(bundle.model, 0.1, v, s), std::invalid_argument);
}

TEST_CASE("X and Z are P-martingales inside the ELMM range") {
    const auto bundle = default_bundle();
    const double c_l = compute_c_l(bundle);
    const double a_top = 0.9 * elmm_bound(c_l);
    const TimeGrid grid(0.0, 1.0, 50);
    const auto checks = martingale_check(bundle, {0.0, 0.5 * a_top, a_top}, c_l, 20000, grid, 17, 2);
    REQUIRE(checks.size() == 3);
    CHECK(checks[0].x.pass);
    CHECK(checks[0].z.estimate == 1.0);
    for (const auto& c : checks) {
        CHECK(c.classification != Admissibility::inadmissible);
        CHECK(c.x.pass);
        CHECK(c.z.pass);
        CHECK(c.x.n_paths == 20000);
    }
    CHECK(checks[2].classification == Admissibility::elmm);
}

TEST_CASE("discounted stock is a Q(a) martingale for EMM a") {
    auto bundle = default_bundle();
    const double c_l = compute_c_l(bundle);
    const TimeGrid grid(0.0, 1.0, 50);
    const double a = 0.5 * emm_bound(c_l, bundle.model.rho);
    const auto e = emm_check_direct(bundle, a, c_l, 20000, grid, 5, 2);
    REQUIRE(e.direct.has_value());
    REQUIRE(e.agreement.has_value());
    CHECK(e.classification == Admissibility::emm);
    CHECK(e.direct->pass);
    CHECK(e.weighted.pass);
    CHECK(e.agreement->pass);
    CHECK(e.pass());

    bundle.model.mu = DriftSchedule(bundle.model.r);
    const auto e0 = emm_check_direct(bundle, 0.0, c_l, 5000, grid, 5, 1);
    CHECK(e0.pass());
    CHECK(e0.weighted.target == bundle.model.s0);

    CHECK_THROWS_AS(emm_check_direct(bundle, 0.99 * elmm_bound(c_l), c_l, 200, grid, 5), std::invalid_argument);
}

TEST_CASE("Q(a) variance mean-reverts across the EMM range") {
    for (double kappa : {0.2, 2.0, 5.0}) {
        for (double sigma : {0.1, 0.3, 0.6}) {
            auto bundle = default_bundle();
            bundle.model.kappa = kappa;
            bundle.model.sigma = sigma;
            bundle.model.vbar = std::max(0.04, sigma * sigma / kappa);
            bundle.model.v0 = bundle.model.vbar;
            if (!check(bundle).empty()) continue;
            const double c_l = compute_c_l(bundle);
            const double b = emm_bound(c_l, bundle.model.rho);
            CHECK(make_measure(bundle.model, -b, c_l).kappa_a > 0.0);
        }
    }
}
