#include "regcalc/kolmogorov.hpp"

#include <cmath>
#include <stdexcept>

namespace regcalc {

namespace {

double phi1(double x, double t) {
    if (std::abs(x * t) < 1e-8) return t * (1.0 + 0.5 * x * t);
    return std::expm1(x * t) / x;
}

// int_0^t e^{rA} S e^{rA} dr for diagonal A: entrywise phi1(a_i + a_j, t) S_ij.
Mat integrated_covariance(const Vec& a, const Mat& s, double t) {
    Mat out(s.rows(), s.cols());
    for (Eigen::Index j = 0; j < s.cols(); ++j)
        for (Eigen::Index i = 0; i < s.rows(); ++i) out(i, j) = phi1(a(i) + a(j), t) * s(i, j);
    return out;
}

// Symmetric square root factor L with L L^T = C, clipping round-off negatives.
Mat psd_factor(const Mat& c) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (c + c.transpose()));
    if (es.info() != Eigen::Success) throw NumericalError("covariance factorization failed");
    const double scale = std::max(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
    if (es.eigenvalues().minCoeff() < -1e-10 * scale) throw NumericalError("transition covariance is not PSD");
    const Vec root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal();
}

Mat sigma_q_sigma(const GalerkinSpace& space, const Mat& sigma) { return martingale_bracket_Q_phi(sigma, space.q); }

}  // namespace

void KolmoProblem::validate() const {
    space.validate();
    const auto d = static_cast<Eigen::Index>(space.dim());
    if (eta.size() != d) throw std::invalid_argument("kolmo: eta has the wrong dimension");
    if (!(s > 0.0)) throw std::invalid_argument("kolmo: s must be positive");
    if (steps == 0) throw std::invalid_argument("kolmo: need at least one time step");
    if (!g) throw std::invalid_argument("kolmo: missing terminal function g");
    if (coeffs.constant && (coeffs.b_const.size() != d || coeffs.sigma_const.rows() != d || coeffs.sigma_const.cols() != d))
        throw std::invalid_argument("kolmo: coefficient dimensions do not match the space");
}

KolmoEstimate kolmogorov_mc(const KolmoProblem& p, std::size_t m, std::uint64_t seed) {
    p.validate();
    if (m == 0) throw std::invalid_argument("kolmo: need at least one path");
    const auto d = static_cast<Eigen::Index>(p.space.dim());
    const double dt = p.s / static_cast<double>(p.steps);
    const Vec e = p.space.semigroup(dt);
    const Vec sqdt = (p.space.q * dt).cwiseSqrt();

    Vec drift;
    Mat factor;
    if (p.coeffs.constant) {
        drift = p.space.semigroup_integral(dt).cwiseProduct(p.coeffs.b_const);
        factor = psd_factor(integrated_covariance(p.space.a, sigma_q_sigma(p.space, p.coeffs.sigma_const), dt));
    }

    std::vector<double> values(m);
    parallel_for(m, [&](std::size_t i) {
        NormalStream rng(derive_seed(seed, i));
        Vec y = p.eta;
        Vec xi(d);
        for (std::size_t k = 0; k < p.steps; ++k) {
            for (Eigen::Index j = 0; j < d; ++j) xi(j) = rng();
            if (p.coeffs.constant) {
                y = e.cwiseProduct(y) + drift + factor * xi;
            } else {
                const double tr = p.s - static_cast<double>(k) * dt;  // time-reversed coefficients
                const Vec dw = sqdt.cwiseProduct(xi);
                y = e.cwiseProduct(y + dt * p.coeffs.b(tr, y) + p.coeffs.sigma(tr, y) * dw);
            }
        }
        values[i] = p.g(y);
    });

    std::vector<double> finite;
    finite.reserve(m);
    for (double v : values)
        if (std::isfinite(v)) finite.push_back(v);
    KolmoEstimate est;
    est.paths = finite.size();
    est.nan_paths = m - finite.size();
    if (finite.empty()) throw NumericalError("kolmo: every path produced a non-finite value");
    const auto st = sample_stats(finite);
    est.v_hat = st.mean;
    est.stderr_ = st.stderr_;
    return est;
}

GaussianMoments gaussian_moments(const GalerkinSpace& space, const Vec& b, const Mat& sigma, const Vec& eta, double s) {
    space.validate();
    GaussianMoments g;
    g.mean = space.semigroup(s).cwiseProduct(eta) + space.semigroup_integral(s).cwiseProduct(b);
    g.cov = integrated_covariance(space.a, sigma_q_sigma(space, sigma), s);
    return g;
}

double gaussian_oracle(const GalerkinSpace& space, const Vec& b, const Mat& sigma, const QuadraticG& g, const Vec& eta,
                       double s) {
    const auto mo = gaussian_moments(space, b, sigma, eta, s);
    return g(mo.mean) + (g.G * mo.cov).trace();
}

Vec gaussian_oracle_gradient(const GalerkinSpace& space, const Vec& b, const QuadraticG& g, const Vec& eta, double s) {
    const Vec mean = space.semigroup(s).cwiseProduct(eta) + space.semigroup_integral(s).cwiseProduct(b);
    return space.semigroup(s).cwiseProduct(g.gradient(mean));
}

DecompositionLevel decomposition_check(const GalerkinSpace& space, const Vec& b, const Mat& sigma, const QuadraticG& g,
                                       const Vec& eta, double s, std::size_t steps, std::size_t m,
                                       std::uint64_t seed) {
    space.validate();
    const auto d = static_cast<Eigen::Index>(space.dim());
    if (b.size() != d || sigma.rows() != d || sigma.cols() != d || eta.size() != d)
        throw std::invalid_argument("decomposition: dimension mismatch");
    if (steps == 0 || m < 2) throw std::invalid_argument("decomposition: need steps >= 1 and m >= 2");
    const double dt = s / static_cast<double>(steps);
    const Vec e = space.semigroup(dt);
    const Vec sqdt = (space.q * dt).cwiseSqrt();
    const Mat sqs = sigma_q_sigma(space, sigma);
    const double v0 = gaussian_oracle(space, b, sigma, g, eta, s);

    std::vector<double> res(m), si(m), iso(m);
    parallel_for(m, [&](std::size_t i) {
        NormalStream rng(derive_seed(seed, i));
        Vec y = eta;
        Vec dw(d);
        double integral = 0.0, isometry = 0.0;
        for (std::size_t k = 0; k < steps; ++k) {
            const double remaining = s - static_cast<double>(k) * dt;
            const Vec dv = gaussian_oracle_gradient(space, b, g, y, remaining);
            for (Eigen::Index j = 0; j < d; ++j) dw(j) = sqdt(j) * rng();
            const Vec noise = sigma * dw;
            integral += dv.dot(noise);
            isometry += dt * dv.dot(sqs * dv);
            y = e.cwiseProduct(y + dt * b + noise);
        }
        res[i] = v0 + integral - g(y);
        si[i] = integral;
        iso[i] = isometry;
    });

    DecompositionLevel lvl;
    lvl.steps = steps;
    lvl.dt = dt;
    lvl.residual = sample_stats(res);
    double ss = 0.0;
    for (double r : res) ss += r * r;
    lvl.rms_residual = std::sqrt(ss / static_cast<double>(m));
    lvl.stochastic_integral = sample_stats(si);
    lvl.isometry_variance = sample_stats(iso).mean;
    return lvl;
}

}  // namespace regcalc
