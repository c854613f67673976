#include <doctest.h>

#include "regcalc/ito_verify.hpp"

#include <cmath>

using namespace regcalc;

TEST_CASE("affine functions have no second-order term") {
    const Grid g(1.0, 1024);
    const auto w = simulate(ProcessSpec::brownian(), g, 1);
    const auto F = C12Function::affine(0.5, -2.0, 3.0);
    for (std::size_t k : {2u, 16u, 64u}) {
        const auto terms = ito_terms(F, w, k, 0.9);
        CHECK(std::abs(terms.residual) < 1e-12);
        CHECK(terms.second_order == 0.0);
    }
}

TEST_CASE("x^2 satisfies the regularized chain rule identically") {
    // (X_{j+k}^2 - X_j^2) = 2 X_j dX + dX^2 for every cell, so the residual is round-off.
    const Grid g(1.0, 512);
    const auto x = simulate(ProcessSpec::fbm(0.4), g, 2);
    for (const auto& F : {C12Function::square(), C12Function::half_square()}) {
        const auto terms = ito_terms(F, x, 4, 1.0);
        CHECK(std::abs(terms.residual) < 1e-10 * (1.0 + std::abs(terms.lhs)));
    }
    std::vector<double> z(x.values().begin(), x.values().end());
    CHECK(std::abs(chain_rule_residual(C12Function::square(), z, x, 4 * g.dt(), 0.7)) < 1e-10);
}

TEST_CASE("sine of brownian motion") {
    const Grid g(1.0, 4096);
    const auto w = simulate(ProcessSpec::brownian(), g, 3);
    const auto rep = ito_report(C12Function::sine(), w, EpsSchedule::standard(g), 1.0, 0.05);
    REQUIRE(rep.levels.size() == 6);
    CHECK(std::abs(rep.levels.back().residual) < 0.02);
    // The left-hand side approaches the true increment as eps shrinks.
    CHECK(std::abs(rep.levels.back().gap) < std::abs(rep.levels.front().gap) + 1e-3);
    CHECK(rep.passed);
    const double inc = std::sin(w[4096]) - std::sin(w[0]);
    CHECK(rep.levels.back().increment == doctest::Approx(inc));
}

TEST_CASE("time-dependent function t x") {
    const Grid g(1.0, 2048);
    const auto w = simulate(ProcessSpec::brownian(), g, 4);
    const auto terms = ito_terms(C12Function::time_times_x(), w, 2, 1.0);
    CHECK(std::abs(terms.residual + terms.gap) < 0.02);
}

TEST_CASE("window formula holds exactly for quadratic functionals") {
    const Grid g(1.0, 256);
    const WindowGrid wg(g, 0.5);
    const auto w = simulate(ProcessSpec::brownian(), g, 5);
    for (const auto& F : {ElementaryFunctional::squared_mean(), ElementaryFunctional::squared_norm(),
                          ElementaryFunctional::point_square()}) {
        for (std::size_t k : {2u, 8u}) {
            const auto t = banach_ito_terms(F, w, wg, k, 1.0);
            CHECK(std::abs(t.residual) < 1e-10 * (1.0 + std::abs(t.lhs)));
        }
    }
}

TEST_CASE("window formula for a smooth point functional on brownian paths") {
    const Grid g(1.0, 1024);
    const WindowGrid wg(g, 0.25);
    const auto w = simulate(ProcessSpec::brownian(), g, 6);
    const auto F = ElementaryFunctional::point_eval([](double x) { return std::cos(x); },
                                                    [](double x) { return -std::sin(x); },
                                                    [](double x) { return -std::cos(x); });
    const auto rep = banach_ito_residual(F, w, wg, EpsSchedule::standard(g), 1.0, 0.05);
    CHECK(std::abs(rep.levels.back().residual) < 0.02);
    CHECK(rep.passed);
}

TEST_CASE("window grid must match the path grid") {
    const Grid g(1.0, 256), other(1.0, 128);
    const auto w = simulate(ProcessSpec::brownian(), g, 7);
    CHECK_THROWS_AS(banach_ito_terms(ElementaryFunctional::squared_mean(), w, WindowGrid(other, 0.5), 2, 1.0),
                    std::invalid_argument);
}
