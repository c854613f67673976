#include "regcalc/convolution.hpp"

#include "regcalc/common.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace regcalc {

namespace {

// (e^{x t} - 1) / x, with the x -> 0 limit.
double phi1(double x, double t) {
    if (std::abs(x * t) < 1e-8) return t * (1.0 + 0.5 * x * t);
    return std::expm1(x * t) / x;
}

Vec coeff_b(const CoeffFns& c, double t, const Vec& x) { return c.constant ? c.b_const : c.b(t, x); }
Mat coeff_sigma(const CoeffFns& c, double t, const Vec& x) { return c.constant ? c.sigma_const : c.sigma(t, x); }

}  // namespace

GalerkinSpace GalerkinSpace::heat(std::size_t dim, double q_power) {
    if (dim == 0) throw std::invalid_argument("Galerkin dimension must be positive");
    GalerkinSpace s;
    s.a.resize(static_cast<Eigen::Index>(dim));
    s.q.resize(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        const double k = static_cast<double>(i + 1);
        s.a(static_cast<Eigen::Index>(i)) = -k * k * std::numbers::pi * std::numbers::pi;
        s.q(static_cast<Eigen::Index>(i)) = std::pow(k, -q_power);
    }
    return s;
}

void GalerkinSpace::validate() const {
    if (a.size() == 0 || a.size() != q.size()) throw std::invalid_argument("Galerkin space: a and q must match");
    if (!a.allFinite() || !q.allFinite()) throw std::invalid_argument("Galerkin space: non-finite eigenvalues");
    if ((q.array() <= 0.0).any()) throw std::invalid_argument("Galerkin space: Q must be injective (q_i > 0)");
    if ((a.array() > 0.0).any()) throw std::invalid_argument("Galerkin space: a_i must be <= 0");
}

Vec GalerkinSpace::semigroup(double t) const { return (a.array() * t).exp().matrix(); }

Vec GalerkinSpace::semigroup_integral(double t) const {
    Vec out(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out(i) = phi1(a(i), t);
    return out;
}

Vec GalerkinSpace::graph_weights() const { return (1.0 + a.array().square()).sqrt().matrix(); }

CoeffFns CoeffFns::constant_coeffs(Vec b, Mat sigma) {
    if (sigma.rows() != b.size() || sigma.cols() != b.size())
        throw std::invalid_argument("coefficients: sigma must be d x d with d = dim b");
    CoeffFns c;
    c.constant = true;
    c.b_const = b;
    c.sigma_const = sigma;
    c.b = [b](double, const Vec&) { return b; };
    c.sigma = [sigma](double, const Vec&) { return sigma; };
    c.lipschitz = std::max({1.0, b.norm(), sigma.norm()});
    return c;
}

CoeffFns CoeffFns::ou(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return constant_coeffs(Vec::Zero(d), Mat::Identity(d, d));
}

HypothesisCheck check_hypothesis(const CoeffFns& c, const GalerkinSpace& space, double horizon, std::size_t samples,
                                 std::uint64_t seed) {
    space.validate();
    const auto d = static_cast<Eigen::Index>(space.dim());
    const Vec sq = space.q.cwiseSqrt();
    NormalStream rng(seed);
    std::uniform_real_distribution<double> unif(0.0, horizon);
    HypothesisCheck h;
    auto draw = [&](double scale) {
        Vec v(d);
        for (Eigen::Index i = 0; i < d; ++i) v(i) = scale * rng();
        return v;
    };
    for (std::size_t s = 0; s < samples; ++s) {
        const double t = unif(rng.engine());
        const double scale = std::pow(10.0, static_cast<double>(s % 5) - 2.0);
        const Vec x = draw(scale), y = draw(scale);
        const Vec bx = coeff_b(c, t, x), by = coeff_b(c, t, y);
        const Mat sx = coeff_sigma(c, t, x) * sq.asDiagonal();
        const Mat sy = coeff_sigma(c, t, y) * sq.asDiagonal();
        if (!bx.allFinite() || !sx.allFinite()) throw NumericalError("coefficient evaluation produced non-finite values");
        const double dist = (x - y).norm();
        if (dist > 0.0) {
            const double r = std::max((bx - by).norm(), (sx - sy).norm()) / (c.lipschitz * dist);
            h.worst_lipschitz_ratio = std::max(h.worst_lipschitz_ratio, r);
        }
        const double g = std::max(bx.norm(), sx.norm()) / (c.lipschitz * (1.0 + x.norm()));
        h.worst_growth_ratio = std::max(h.worst_growth_ratio, g);
    }
    h.lipschitz_ok = h.worst_lipschitz_ratio <= 1.0 + 1e-12;
    h.growth_ok = h.worst_growth_ratio <= 1.0 + 1e-12;
    return h;
}

Mat simulate_q_wiener(const GalerkinSpace& space, const Grid& grid, std::uint64_t seed) {
    space.validate();
    const auto n = static_cast<Eigen::Index>(grid.steps());
    const auto d = static_cast<Eigen::Index>(space.dim());
    const Vec sd = (space.q * grid.dt()).cwiseSqrt();
    NormalStream rng(seed);
    Mat w(n, d);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index i = 0; i < d; ++i) w(k, i) = sd(i) * rng();
    return w;
}

SamplePath ConvolutionPath::project(const Vec& w) const {
    const Vec p = x * w;
    return SamplePath(grid, std::vector<double>(p.data(), p.data() + p.size()), "projection");
}

SamplePath ConvolutionPath::project_a_part(const Vec& w) const {
    const Vec p = a_part * w;
    return SamplePath(grid, std::vector<double>(p.data(), p.data() + p.size()), "A-part projection");
}

ConvolutionPath simulate_convolution(const GalerkinSpace& space, const CoeffFns& coeffs, const Vec& x0,
                                     const Grid& grid, std::uint64_t seed) {
    space.validate();
    const auto d = static_cast<Eigen::Index>(space.dim());
    if (x0.size() != d) throw std::invalid_argument("convolution: x0 has the wrong dimension");
    const auto n = static_cast<Eigen::Index>(grid.steps());
    const double dt = grid.dt();
    const Mat dw = simulate_q_wiener(space, grid, seed);
    const Vec e = space.semigroup(dt);

    ConvolutionPath p{grid, Mat(n + 1, d), Mat(n + 1, d), Mat::Zero(n + 1, d), Mat::Zero(n + 1, d)};
    p.x.row(0) = x0.transpose();
    p.m.row(0) = x0.transpose();
    Vec xk = x0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double tk = grid.time(static_cast<std::size_t>(k));
        const Vec b = coeff_b(coeffs, tk, xk);
        const Mat s = coeff_sigma(coeffs, tk, xk);
        const Vec noise = s * dw.row(k).transpose();
        p.m.row(k + 1) = p.m.row(k) + noise.transpose();
        p.v.row(k + 1) = p.v.row(k) + dt * b.transpose();
        p.a_part.row(k + 1) = p.a_part.row(k) + dt * (space.a.cwiseProduct(xk)).transpose();
        xk = e.cwiseProduct(xk + dt * b + noise);
        if (!xk.allFinite()) throw NumericalError("convolution: non-finite state at step " + std::to_string(k + 1));
        p.x.row(k + 1) = xk.transpose();
    }
    return p;
}

ConvolutionChiQV chi_qv_convolution(const ConvolutionPath& path, const GalerkinSpace& space, const CoeffFns& coeffs,
                                    const Vec& a, const Vec& b, const EpsSchedule& schedule, double t) {
    const auto d = static_cast<Eigen::Index>(space.dim());
    if (a.size() != d || b.size() != d) throw std::invalid_argument("chi_qv_convolution: a, b have the wrong dimension");
    ConvolutionChiQV out;
    out.full = covariation(path.project(a), path.project(b), schedule, t);
    out.a_part = covariation(path.project_a_part(a), path.project_a_part(b), schedule, t);

    // Tr(L_phi sigma Q sigma^T) with L_phi = a b^T is b^T sigma Q sigma^T a.
    const Grid& g = path.grid;
    const Mat lphi = form_to_operator(a, b);
    double acc = 0.0;
    for (std::size_t k = 0; k < g.steps(); ++k) {
        const double tk = g.time(k);
        if (tk >= t) break;
        const double w = std::min(g.dt(), t - tk);
        const Vec xk = path.x.row(static_cast<Eigen::Index>(k)).transpose();
        const Mat qs = martingale_bracket_Q_phi(coeff_sigma(coeffs, tk, xk), space.q);
        acc += w * pairing_trace(qs, lphi);
    }
    out.closed_form = acc;
    return out;
}

double a_part_dual_variation(const ConvolutionPath& path, const GalerkinSpace& space, double t) {
    const Vec w = space.graph_weights().cwiseInverse();
    double tv = 0.0;
    for (std::size_t k = 0; k < path.grid.steps() && path.grid.time(k) < t; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        tv += (path.a_part.row(kk + 1) - path.a_part.row(kk)).transpose().cwiseProduct(w).norm();
    }
    return tv;
}

}  // namespace regcalc
