#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace regcalc {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

enum class OperatorRole { Nuclear, HilbertSchmidt, Bounded, BilinearForm };

struct OperatorMat {
    Mat m;
    OperatorRole role = OperatorRole::Bounded;
};

struct TraceBounds {
    double trace = 0.0;
    double l1_norm = 0.0;        // sum of singular values
    double diag_abs_sum = 0.0;   // sum |<T e_n, e_n>|
    bool bound_ok = false;       // |Tr| <= l1 and diag_abs_sum <= l1 (relative slack 1e-12)
};

TraceBounds trace_and_bounds(const Mat& t);
TraceBounds trace_and_bounds(const OperatorMat& t);

struct HsCheck {
    double frobenius_sq = 0.0;  // sum of squared entries
    double trace_tts = 0.0;     // Tr(T T^*)
    double residual = 0.0;
};

HsCheck hs_identity_check(const Mat& t);

/// Tensor u = sum_i x_i (x) y_i as the operator T_u = sum_i y_i x_i^T.
Mat tensor_to_operator(const std::vector<Vec>& xs, const std::vector<Vec>& ys);
/// Bilinear form phi(x, y) = x^T B y is represented by L_phi = B; for
/// phi = a (x) b this is a b^T.
Mat form_to_operator(const Vec& a, const Vec& b);

/// Tr(T_u L_phi); equals phi(u) = sum_i x_i^T L_phi y_i.
double pairing_trace(const Mat& tu, const Mat& lphi);
/// Direct evaluation sum_i x_i^T B y_i, used as an oracle.
double pairing_direct(const std::vector<Vec>& xs, const std::vector<Vec>& ys, const Mat& form);

struct OperatorIntegral {
    Mat integral;              // left-endpoint quadrature of g over [0, T]
    double trace_of_integral = 0.0;
    double integral_of_trace = 0.0;
    double residual = 0.0;
};

/// Fails with std::invalid_argument when some g(t_k) is not positive
/// semidefinite.
OperatorIntegral integrate_operator_trace(const std::function<Mat(double)>& g, double horizon, std::size_t steps);

/// (Phi Q^{1/2})(Phi Q^{1/2})^T for Q = diag(q).
Mat martingale_bracket_Q_phi(const Mat& phi, const Vec& q);

/// Smallest eigenvalue of the symmetric part.
double min_symmetric_eigenvalue(const Mat& m);

}  // namespace regcalc
