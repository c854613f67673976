#include <doctest.h>

#include "regcalc/convolution.hpp"

#include <cmath>

using namespace regcalc;

TEST_CASE("heat space and its semigroup") {
    const auto s = GalerkinSpace::heat(4);
    CHECK(s.a(2) == doctest::Approx(-9 * M_PI * M_PI));
    CHECK(s.q(1) == doctest::Approx(0.25));
    const Vec e = s.semigroup(0.01);
    const Vec integral = s.semigroup_integral(0.01);
    for (int i = 0; i < 4; ++i) {
        CHECK(e(i) == doctest::Approx(std::exp(s.a(i) * 0.01)));
        CHECK(integral(i) == doctest::Approx((1 - std::exp(s.a(i) * 0.01)) / -s.a(i)));
    }
    GalerkinSpace bad = s;
    bad.q(0) = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.a(0) = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    // a = 0 is allowed and integrates to t.
    GalerkinSpace flat{Vec::Zero(1), Vec::Ones(1)};
    CHECK(flat.semigroup_integral(0.3)(0) == doctest::Approx(0.3));
}

TEST_CASE("Q-Wiener increments have covariance Q dt") {
    const auto s = GalerkinSpace::heat(3);
    const Grid g(1.0, 20000);
    const Mat dw = simulate_q_wiener(s, g, 4);
    for (int i = 0; i < 3; ++i) {
        const double var = dw.col(i).squaredNorm() / dw.rows();
        CHECK(var == doctest::Approx(s.q(i) * g.dt()).epsilon(0.05));
    }
    CHECK(std::abs(dw.col(0).dot(dw.col(1)) / dw.rows()) < 0.05 * g.dt());
}

TEST_CASE("hypothesis check") {
    const auto s = GalerkinSpace::heat(4);
    const auto ou = check_hypothesis(CoeffFns::ou(4), s, 1.0, 200, 1);
    CHECK(ou.lipschitz_ok);
    CHECK(ou.growth_ok);
    CoeffFns quad;
    quad.b = [](double, const Vec& x) { return Vec(x.cwiseProduct(x) * 10.0); };
    quad.sigma = [](double, const Vec& x) { return Mat::Identity(x.size(), x.size()); };
    quad.lipschitz = 1.0;
    const auto bad = check_hypothesis(quad, s, 1.0, 200, 1);
    CHECK_FALSE(bad.lipschitz_ok);
}

TEST_CASE("split X = x0 + M + V + A tracks the mild solution") {
    const auto s = GalerkinSpace::heat(3);
    const Grid g(0.5, 8192);
    Vec x0(3);
    x0 << 1.0, 0.5, -0.2;
    Vec b(3);
    b << 1.0, 0.0, 0.5;
    const auto p = simulate_convolution(s, CoeffFns::constant_coeffs(b, Mat::Identity(3, 3)), x0, g, 8);
    const auto n = static_cast<Eigen::Index>(g.steps());
    CHECK((p.x.row(0) - x0.transpose()).norm() == 0.0);
    // m starts at x0 and carries the noise; the split differs from X only by the
    // exponential-Euler discretization.
    const Vec split = (p.m.row(n) + p.v.row(n) + p.a_part.row(n)).transpose();
    CHECK((split - p.x.row(n).transpose()).norm() < 0.05);
}

TEST_CASE("chi bracket of a Galerkin OU process") {
    const auto s = GalerkinSpace::heat(4);
    const Grid g(0.5, 4096);
    Vec a = Vec::Zero(4), b = Vec::Zero(4);
    a(0) = 1.0;
    b(0) = 1.0;
    const auto coeffs = CoeffFns::ou(4);
    double full = 0, apart = 0, closed = 0;
    const int reps = 10;
    for (int r = 0; r < reps; ++r) {
        const auto p = simulate_convolution(s, coeffs, Vec::Zero(4), g, derive_seed(77, r));
        const auto c = chi_qv_convolution(p, s, coeffs, a, b, EpsSchedule::standard(g), 0.5);
        full += c.full.extrapolated / reps;
        apart += std::abs(c.a_part.extrapolated) / reps;
        closed = c.closed_form;
    }
    // t <a, Q b> = 0.5 q_1.
    CHECK(closed == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(full == doctest::Approx(0.5).epsilon(0.08));
    CHECK(apart < 0.1 * full);
}

TEST_CASE("A-part has finite dual variation") {
    const auto s = GalerkinSpace::heat(8);
    const auto p = simulate_convolution(s, CoeffFns::ou(8), Vec::Ones(8), Grid(0.5, 1024), 3);
    const double v1 = a_part_dual_variation(p, s, 0.5);
    const double v2 = a_part_dual_variation(simulate_convolution(s, CoeffFns::ou(8), Vec::Ones(8), Grid(0.5, 4096), 3), s, 0.5);
    CHECK(std::isfinite(v1));
    // Refining the grid does not make it blow up.
    CHECK(v2 < 2.0 * v1);
}
