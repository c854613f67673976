#include <doctest.h>

#include "regcalc/kolmogorov.hpp"
#include "regcalc/runner.hpp"

#include <cmath>
#include <limits>

using namespace regcalc;

namespace {

GalerkinSpace one_mode(double a, double q) {
    GalerkinSpace s;
    s.a = Vec::Constant(1, a);
    s.q = Vec::Constant(1, q);
    return s;
}

}  // namespace

TEST_CASE("gaussian moments of a scalar OU process") {
    const double a = -1.5, q = 0.8, sig = 1.2, eta = 0.7, b = 0.3, s = 0.6;
    const auto mo = gaussian_moments(one_mode(a, q), Vec::Constant(1, b), Mat::Constant(1, 1, sig), Vec::Constant(1, eta), s);
    CHECK(mo.mean(0) == doctest::Approx(std::exp(a * s) * eta + b * std::expm1(a * s) / a));
    CHECK(mo.cov(0, 0) == doctest::Approx(sig * sig * q * std::expm1(2 * a * s) / (2 * a)));
}

TEST_CASE("Monte Carlo value agrees with the Gaussian oracle") {
    const auto setup = default_ou_quadratic(6, 0.5);
    KolmoProblem p;
    p.space = setup.space;
    p.coeffs = CoeffFns::constant_coeffs(setup.b, setup.sigma);
    p.g = [g = setup.g](const Vec& x) { return g(x); };
    p.s = setup.s;
    p.eta = setup.eta;
    p.steps = 4;
    const double oracle = gaussian_oracle(setup.space, setup.b, setup.sigma, setup.g, setup.eta, setup.s);
    const auto est = kolmogorov_mc(p, 20000, 9);
    CHECK(est.paths == 20000);
    CHECK(est.nan_paths == 0);
    CHECK(std::abs(est.v_hat - oracle) < 4 * est.stderr_);
}

TEST_CASE("general coefficients go through the Euler step") {
    // Same linear problem handed over as functions: the Euler scheme is biased by O(dt) only.
    GalerkinSpace sp = one_mode(-1.0, 1.0);
    CoeffFns c;
    c.b = [](double, const Vec& x) { return Vec(Vec::Constant(x.size(), 0.5)); };
    c.sigma = [](double, const Vec& x) { return Mat(Mat::Identity(x.size(), x.size())); };
    KolmoProblem p{sp, c, [](const Vec& x) { return x(0) * x(0); }, 0.5, Vec::Constant(1, 1.0), 64};
    QuadraticG g{Mat::Identity(1, 1), Vec::Zero(1), 0.0};
    const double oracle = gaussian_oracle(sp, Vec::Constant(1, 0.5), Mat::Identity(1, 1), g, Vec::Constant(1, 1.0), 0.5);
    const auto est = kolmogorov_mc(p, 20000, 3);
    CHECK(std::abs(est.v_hat - oracle) < 4 * est.stderr_ + 0.02 * oracle);
}

TEST_CASE("non-finite payoffs are excluded and counted") {
    KolmoProblem p{one_mode(-1.0, 1.0), CoeffFns::ou(1),
                   [](const Vec& x) { return x(0) > 0 ? std::numeric_limits<double>::quiet_NaN() : x(0); }, 0.5,
                   Vec::Zero(1), 4};
    const auto est = kolmogorov_mc(p, 2000, 1);
    CHECK(est.nan_paths > 800);
    CHECK(est.nan_paths < 1200);
    CHECK(est.paths + est.nan_paths == 2000);
    CHECK(est.v_hat < 0);
}

TEST_CASE("problem validation") {
    KolmoProblem p{GalerkinSpace::heat(3), CoeffFns::ou(3), [](const Vec&) { return 0.0; }, 0.5, Vec::Zero(2), 4};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.eta = Vec::Zero(3);
    CHECK_NOTHROW(p.validate());
    p.s = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("oracle gradient matches finite differences") {
    const auto setup = default_ou_quadratic(5, 0.3);
    Vec b = Vec::LinSpaced(5, 0.2, 1.0);
    const Vec grad = gaussian_oracle_gradient(setup.space, b, setup.g, setup.eta, 0.3);
    const double h = 1e-5;
    for (int i = 0; i < 5; ++i) {
        Vec up = setup.eta, dn = setup.eta;
        up(i) += h;
        dn(i) -= h;
        const double fd = (gaussian_oracle(setup.space, b, setup.sigma, setup.g, up, 0.3) -
                           gaussian_oracle(setup.space, b, setup.sigma, setup.g, dn, 0.3)) /
                          (2 * h);
        CHECK(grad(i) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("decomposition residual shrinks with the step and obeys the isometry") {
    const auto sp = GalerkinSpace::heat(4);
    const Vec b = Vec::Constant(4, 0.5);
    Mat sigma = Mat::Identity(4, 4);
    sigma(0, 1) = 0.3;
    QuadraticG g{Mat::Identity(4, 4), Vec::Ones(4), 0.0};
    const Vec eta = Vec::LinSpaced(4, 1.0, 0.25);
    const auto coarse = decomposition_check(sp, b, sigma, g, eta, 0.5, 64, 2000, 1);
    const auto fine = decomposition_check(sp, b, sigma, g, eta, 0.5, 256, 2000, 1);
    CHECK(fine.rms_residual < coarse.rms_residual);
    const double var = coarse.stochastic_integral.stddev * coarse.stochastic_integral.stddev;
    CHECK(var == doctest::Approx(coarse.isometry_variance).epsilon(0.1));
    CHECK(std::abs(coarse.stochastic_integral.mean) < 4 * coarse.stochastic_integral.stderr_);
}
