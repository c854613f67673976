#pragma once

#include "regcalc/estimators.hpp"
#include "regcalc/grid_paths.hpp"
#include "regcalc/operator_algebra.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace regcalc {

/// Diagonal truncation: A e_i = a_i e_i, Q e_i = q_i e_i.
struct GalerkinSpace {
    Vec a;
    Vec q;

    /// a_i = -i^2 pi^2, q_i = i^{-p}.
    static GalerkinSpace heat(std::size_t dim, double q_power = 2.0);
    std::size_t dim() const { return static_cast<std::size_t>(a.size()); }
    void validate() const;
    /// Diagonal of e^{tA}.
    Vec semigroup(double t) const;
    /// Diagonal of int_0^t e^{rA} dr.
    Vec semigroup_integral(double t) const;
    /// (1 + a_i^2)^{1/2}, the D(A*) graph-norm weights.
    Vec graph_weights() const;
};

/// Drift and diffusion in eigen-coordinates. When `constant` is set, b and
/// sigma ignore their arguments and return b_const / sigma_const.
struct CoeffFns {
    std::function<Vec(double, const Vec&)> b;
    std::function<Mat(double, const Vec&)> sigma;
    double lipschitz = 1.0;
    bool constant = false;
    Vec b_const;
    Mat sigma_const;

    static CoeffFns constant_coeffs(Vec b, Mat sigma);
    /// b = 0, sigma = I.
    static CoeffFns ou(std::size_t dim);
};

struct HypothesisCheck {
    bool lipschitz_ok = true;
    bool growth_ok = true;
    double worst_lipschitz_ratio = 0.0;  // max |b(x)-b(y)| / (C|x-y|), same for sigma Q^{1/2}
    double worst_growth_ratio = 0.0;     // max |b(x)| / (C(1+|x|)), same for sigma Q^{1/2}
};

/// Samples (t, eta, gamma) and checks the Lipschitz and linear-growth bounds
/// for b and for sigma Q^{1/2} in Hilbert-Schmidt norm.
HypothesisCheck check_hypothesis(const CoeffFns& c, const GalerkinSpace& space, double horizon, std::size_t samples,
                                 std::uint64_t seed);

/// n x d matrix of increments, row k ~ N(0, diag(q) dt).
Mat simulate_q_wiener(const GalerkinSpace& space, const Grid& grid, std::uint64_t seed);

/// Vector path with the split X = M + V + A:
///   M_t = x0 + int sigma dW,  V_t = int b dr,  A_t = int A X_r dr.
struct ConvolutionPath {
    Grid grid;
    Mat x;  // (n+1) x d
    Mat m;
    Mat v;
    Mat a_part;

    /// <w, X_{t_k}> as a scalar path.
    SamplePath project(const Vec& w) const;
    SamplePath project_a_part(const Vec& w) const;
};

/// Exponential Euler X_{k+1} = e^{dt A}(X_k + b dt + sigma dW_k).
ConvolutionPath simulate_convolution(const GalerkinSpace& space, const CoeffFns& coeffs, const Vec& x0,
                                     const Grid& grid, std::uint64_t seed);

struct ConvolutionChiQV {
    EstimateSeries full;    // (1/eps) int <a, dX><b, dX> dr
    EstimateSeries a_part;  // same on the A-part alone
    double closed_form = 0.0;  // int_0^t Tr(L_phi sigma Q sigma^T) dr
};

ConvolutionChiQV chi_qv_convolution(const ConvolutionPath& path, const GalerkinSpace& space, const CoeffFns& coeffs,
                                    const Vec& a, const Vec& b, const EpsSchedule& schedule, double t);

/// Total variation of the A-part in the dual graph norm
/// |v| = (sum v_i^2 / (1 + a_i^2))^{1/2}, over [0, t].
double a_part_dual_variation(const ConvolutionPath& path, const GalerkinSpace& space, double t);

}  // namespace regcalc
