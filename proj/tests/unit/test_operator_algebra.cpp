#include <doctest.h>

#include "regcalc/operator_algebra.hpp"

#include <cmath>

using namespace regcalc;

TEST_CASE("trace and nuclear norm of simple operators") {
    Mat d = Mat::Zero(3, 3);
    d.diagonal() << 1.0, -2.0, 3.0;
    const auto b = trace_and_bounds(d);
    CHECK(b.trace == doctest::Approx(2.0));
    CHECK(b.l1_norm == doctest::Approx(6.0));
    CHECK(b.diag_abs_sum == doctest::Approx(6.0));
    CHECK(b.bound_ok);

    // A rotation has singular values 1, 1.
    const double th = 0.7;
    Mat r(2, 2);
    r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    const auto br = trace_and_bounds(r);
    CHECK(br.trace == doctest::Approx(2 * std::cos(th)));
    CHECK(br.l1_norm == doctest::Approx(2.0));
    CHECK(br.bound_ok);

    CHECK_THROWS_AS(trace_and_bounds(Mat(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(trace_and_bounds(OperatorMat{d, OperatorRole::HilbertSchmidt}), std::invalid_argument);
    CHECK_NOTHROW(trace_and_bounds(OperatorMat{d, OperatorRole::Nuclear}));
}

TEST_CASE("bounds hold for random operators") {
    srand(3);
    for (int rep = 0; rep < 20; ++rep) {
        const Mat t = Mat::Random(6, 6);
        const auto b = trace_and_bounds(t);
        CHECK(b.bound_ok);
        CHECK(b.trace == doctest::Approx(t.trace()));
        CHECK(hs_identity_check(t).residual < 1e-12 * (1 + t.squaredNorm()));
    }
}

TEST_CASE("tensor pairing equals the trace pairing") {
    srand(5);
    std::vector<Vec> xs, ys;
    for (int i = 0; i < 4; ++i) {
        xs.push_back(Vec::Random(5));
        ys.push_back(Vec::Random(5));
    }
    const Mat form = Mat::Random(5, 5);
    const Mat tu = tensor_to_operator(xs, ys);
    CHECK(pairing_trace(tu, form) == doctest::Approx(pairing_direct(xs, ys, form)).epsilon(1e-12));

    // Elementary form phi = a (x) b on u = x (x) y is <a, x><b, y>.
    const Vec a = Vec::Random(5), bb = Vec::Random(5);
    const double want = a.dot(xs[0]) * bb.dot(ys[0]);
    CHECK(pairing_trace(tensor_to_operator({xs[0]}, {ys[0]}), form_to_operator(a, bb)) ==
          doctest::Approx(want).epsilon(1e-12));
    CHECK_THROWS_AS(tensor_to_operator({xs[0]}, {}), std::invalid_argument);
}

TEST_CASE("trace commutes with the Bochner integral") {
    const auto g = [](double t) {
        Mat m = Mat::Zero(2, 2);
        m.diagonal() << t, 2 * t;
        m(0, 1) = m(1, 0) = 0.5 * t;
        return m;
    };
    const auto r = integrate_operator_trace(g, 1.0, 100);
    // Left rule: sum_k dt * 3 t_k = 3 dt^2 n (n - 1) / 2.
    CHECK(r.trace_of_integral == doctest::Approx(3 * 1e-4 * 100 * 99 / 2));
    CHECK(r.residual < 1e-12);
    const auto bad = [](double) {
        Mat m = Mat::Identity(2, 2);
        m(1, 1) = -1;
        return m;
    };
    CHECK_THROWS_AS(integrate_operator_trace(bad, 1.0, 10), std::invalid_argument);
}

TEST_CASE("martingale bracket of sigma Q") {
    Vec q(3);
    q << 1.0, 0.25, 0.0625;
    const Mat b = martingale_bracket_Q_phi(Mat::Identity(3, 3), q);
    CHECK((b - Mat(q.asDiagonal())).norm() < 1e-15);
    Mat phi(2, 3);
    phi << 1, 2, 0, 0, 1, 3;
    const Mat b2 = martingale_bracket_Q_phi(phi, q);
    CHECK((b2 - phi * q.asDiagonal() * phi.transpose()).norm() < 1e-14);
    CHECK(min_symmetric_eigenvalue(b2) >= -1e-14);
    Mat ns(2, 2);
    ns << 1, 2, 0, 1;
    CHECK(min_symmetric_eigenvalue(ns) == doctest::Approx(0.0).epsilon(1e-12));
}
