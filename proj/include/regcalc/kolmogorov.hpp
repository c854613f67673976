#pragma once

#include "regcalc/common.hpp"
#include "regcalc/convolution.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace regcalc {

/// g(x) = x^T G x + c^T x + c0.
struct QuadraticG {
    Mat G;
    Vec c;
    double c0 = 0.0;

    double operator()(const Vec& x) const { return x.dot(G * x) + c.dot(x) + c0; }
    Vec gradient(const Vec& x) const { return (G + G.transpose()) * x + c; }
};

struct KolmoProblem {
    GalerkinSpace space;
    CoeffFns coeffs;
    std::function<double(const Vec&)> g;
    double s = 0.5;
    Vec eta;
    std::size_t steps = 16;  // time steps on [0, s]

    void validate() const;
};

struct KolmoEstimate {
    double v_hat = 0.0;
    double stderr_ = 0.0;
    std::size_t paths = 0;      // finite paths used
    std::size_t nan_paths = 0;  // excluded
};

/// V(s, eta) = E g(Y^s_s) with dY = (A Y + b(s - t, Y)) dt + sigma(s - t, Y) dW.
/// Constant coefficients use the exact Gaussian transition of the frozen
/// linear step; otherwise the exponential Euler step of simulate_convolution.
/// Path i draws from derive_seed(seed, i).
KolmoEstimate kolmogorov_mc(const KolmoProblem& p, std::size_t m, std::uint64_t seed);

/// Gaussian moments of the linear problem with constant b, sigma.
struct GaussianMoments {
    Vec mean;  // e^{sA} eta + int_0^s e^{rA} b dr
    Mat cov;   // int_0^s e^{rA} sigma Q sigma^T e^{rA} dr
};

GaussianMoments gaussian_moments(const GalerkinSpace& space, const Vec& b, const Mat& sigma, const Vec& eta, double s);
/// <m, G m> + Tr(G Sigma) + <c, m> + c0.
double gaussian_oracle(const GalerkinSpace& space, const Vec& b, const Mat& sigma, const QuadraticG& g, const Vec& eta,
                       double s);
/// D_eta of the oracle value at (s, eta): e^{sA} grad g-bar(m_s).
Vec gaussian_oracle_gradient(const GalerkinSpace& space, const Vec& b, const QuadraticG& g, const Vec& eta, double s);

struct DecompositionLevel {
    std::size_t steps = 0;
    double dt = 0.0;
    SampleStats residual;    // R = v(s, eta) + int <Dv, sigma dW> - g(Y_s)
    double rms_residual = 0.0;
    SampleStats stochastic_integral;
    double isometry_variance = 0.0;  // int <Dv, sigma Q sigma^T Dv> dr, mean over paths
};

/// Linear-quadratic check of the strong-solution decomposition with constant
/// coefficients. Uses the exponential Euler step on `steps` intervals.
DecompositionLevel decomposition_check(const GalerkinSpace& space, const Vec& b, const Mat& sigma, const QuadraticG& g,
                                       const Vec& eta, double s, std::size_t steps, std::size_t m,
                                       std::uint64_t seed);

}  // namespace regcalc
