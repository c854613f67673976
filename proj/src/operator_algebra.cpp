#include "regcalc/operator_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace regcalc {

TraceBounds trace_and_bounds(const Mat& t) {
    if (t.rows() != t.cols() || t.rows() == 0) throw std::invalid_argument("trace: square non-empty matrix required");
    if (!t.allFinite()) throw std::invalid_argument("trace: non-finite entries");
    TraceBounds b;
    b.trace = t.trace();
    b.diag_abs_sum = t.diagonal().cwiseAbs().sum();
    Eigen::JacobiSVD<Mat> svd(t);
    b.l1_norm = svd.singularValues().sum();
    const double slack = 1e-12 * std::max(1.0, b.l1_norm);
    b.bound_ok = std::abs(b.trace) <= b.l1_norm + slack && b.diag_abs_sum <= b.l1_norm + slack;
    return b;
}

TraceBounds trace_and_bounds(const OperatorMat& t) {
    if (t.role != OperatorRole::Nuclear) throw std::invalid_argument("trace: operator is not tagged nuclear");
    return trace_and_bounds(t.m);
}

HsCheck hs_identity_check(const Mat& t) {
    HsCheck h;
    double s = 0.0;
    for (Eigen::Index j = 0; j < t.cols(); ++j)
        for (Eigen::Index i = 0; i < t.rows(); ++i) s += t(i, j) * t(i, j);
    h.frobenius_sq = s;
    const Mat tts = t * t.transpose();
    h.trace_tts = tts.trace();
    h.residual = std::abs(h.frobenius_sq - h.trace_tts);
    return h;
}

Mat tensor_to_operator(const std::vector<Vec>& xs, const std::vector<Vec>& ys) {
    if (xs.size() != ys.size() || xs.empty()) throw std::invalid_argument("tensor: need matching non-empty factors");
    Mat t = Mat::Zero(ys.front().size(), xs.front().size());
    for (std::size_t i = 0; i < xs.size(); ++i) t += ys[i] * xs[i].transpose();
    return t;
}

Mat form_to_operator(const Vec& a, const Vec& b) { return a * b.transpose(); }

double pairing_trace(const Mat& tu, const Mat& lphi) {
    if (tu.cols() != lphi.rows() || tu.rows() != lphi.cols())
        throw std::invalid_argument("pairing: incompatible dimensions");
    return (tu * lphi).trace();
}

double pairing_direct(const std::vector<Vec>& xs, const std::vector<Vec>& ys, const Mat& form) {
    if (xs.size() != ys.size()) throw std::invalid_argument("pairing: mismatched factors");
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) acc += xs[i].dot(form * ys[i]);
    return acc;
}

double min_symmetric_eigenvalue(const Mat& m) {
    const Mat sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

OperatorIntegral integrate_operator_trace(const std::function<Mat(double)>& g, double horizon, std::size_t steps) {
    if (!(horizon > 0.0) || steps == 0) throw std::invalid_argument("operator integral: bad grid");
    const double dt = horizon / static_cast<double>(steps);
    OperatorIntegral out;
    for (std::size_t k = 0; k < steps; ++k) {
        const Mat gk = g(static_cast<double>(k) * dt);
        if (gk.rows() != gk.cols()) throw std::invalid_argument("operator integral: g must be square");
        const double scale = std::max(1.0, gk.cwiseAbs().maxCoeff());
        if (min_symmetric_eigenvalue(gk) < -1e-12 * scale)
            throw std::invalid_argument("operator integral: g(t) is not positive semidefinite at node " +
                                        std::to_string(k));
        if (k == 0) out.integral = Mat::Zero(gk.rows(), gk.cols());
        out.integral += dt * gk;
        out.integral_of_trace += dt * gk.trace();
    }
    out.trace_of_integral = out.integral.trace();
    out.residual = std::abs(out.trace_of_integral - out.integral_of_trace);
    return out;
}

Mat martingale_bracket_Q_phi(const Mat& phi, const Vec& q) {
    if (phi.cols() != q.size()) throw std::invalid_argument("Q^Phi: dimension mismatch");
    if ((q.array() < 0.0).any()) throw std::invalid_argument("Q^Phi: Q must be positive");
    const Mat root = phi * q.cwiseSqrt().asDiagonal();
    return root * root.transpose();
}

}  // namespace regcalc
