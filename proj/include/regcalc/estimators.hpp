#pragma once

#include "regcalc/common.hpp"
#include "regcalc/grid_paths.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace regcalc {

/// Decreasing ladder of regularization widths, each an integer multiple of dt.
class EpsSchedule {
public:
    EpsSchedule(const Grid& grid, std::vector<std::size_t> multiples);
    /// {64, 32, 16, 8, 4, 2} * dt.
    static EpsSchedule standard(const Grid& grid);

    std::size_t size() const { return multiples_.size(); }
    std::size_t multiple(std::size_t i) const { return multiples_[i]; }
    double eps(std::size_t i) const { return static_cast<double>(multiples_[i]) * dt_; }
    const std::vector<std::size_t>& multiples() const { return multiples_; }
    std::vector<double> eps_values() const;
    std::size_t smallest_multiple() const { return multiples_.back(); }

private:
    std::vector<std::size_t> multiples_;
    double dt_;
};

/// Per-eps values of a regularized quantity plus a linear extrapolation to eps = 0.
struct EstimateSeries {
    std::vector<double> eps;     // decreasing
    std::vector<double> values;  // values[i] at eps[i]
    double extrapolated = 0.0;
    bool monotone = true;
    double last_rel_change = 0.0;
};

/// Linear least-squares fit in eps over the three smallest eps (two if only
/// two are present); the intercept is the extrapolated limit.
EstimateSeries make_series(std::vector<double> eps, std::vector<double> values);

/// Ensemble reduction of per-path series sharing one eps ladder.
struct EnsembleSeries {
    std::vector<double> eps;
    std::vector<double> mean;
    std::vector<double> stderr_;
    std::vector<double> mad;  // median absolute deviation per eps
    SampleStats extrapolated;
    std::vector<EstimateSeries> per_path;
};

EnsembleSeries reduce_series(std::vector<EstimateSeries> per_path);

// ----------------------------------------------------------------- kernels

/// Cumulative left-endpoint sums C[J] = sum_{j<J} dt * dX_j * dY_j / eps for
/// J = 0..n, where dX_j = X_{j+k} - X_j with the end-value extension.
std::vector<double> covariation_curve(const SamplePath& x, const SamplePath& y, std::size_t k);

/// Cumulative forward sums F[J] = sum_{j<J} dt * Z_j * (X_{j+k} - X_j) / eps.
std::vector<double> forward_curve(std::span<const double> integrand, const SamplePath& x, std::size_t k);

/// Reads a cumulative curve at time t (linear within the last cell).
double read_curve(const std::vector<double>& curve, const Grid& grid, double t);

// ----------------------------------------------------------------- operations

double covariation_eps(const SamplePath& x, const SamplePath& y, double eps, double t);
EstimateSeries covariation(const SamplePath& x, const SamplePath& y, const EpsSchedule& schedule, double t);
EstimateSeries quadratic_variation(const SamplePath& x, const EpsSchedule& schedule, double t);

double forward_integral_eps(std::span<const double> integrand, const SamplePath& x, double eps, double t);
double forward_integral_eps(const std::function<double(double)>& integrand, const SamplePath& x, double eps,
                            double t);
EstimateSeries forward_integral(std::span<const double> integrand, const SamplePath& x, const EpsSchedule& schedule,
                                double t);

struct ImproperIntegral {
    EstimateSeries series;  // keyed by delta (distance to T), decreasing
    bool diverging = false;
};

/// Forward integral on [0, T - delta] for delta in {2,4,8,16} * dt at the
/// smallest eps of the schedule, extrapolated delta -> 0. Integrand values at
/// nodes >= T - delta are never read, so they may be non-finite.
ImproperIntegral improper_forward_integral(std::span<const double> integrand, const SamplePath& x,
                                           const EpsSchedule& schedule,
                                           std::vector<std::size_t> delta_multiples = {16, 8, 4, 2});

/// Y_t X_t - Y_0 X_0 - int Y d-X - int X d-Y - [X,Y] at level eps.
double integration_by_parts_residual(const SamplePath& x, const SamplePath& y, double eps, double t);

/// Function of (t, x) with its x-derivative.
struct SpaceTimeMap {
    std::function<double(double, double)> value;
    std::function<double(double, double)> dx;
};

struct BracketCheck {
    EstimateSeries lhs;  // [f(.,X), g(.,Y)]
    EstimateSeries rhs;  // int f_x g_x d[X,Y]^eps
};

BracketCheck bvm_covariation_check(const SpaceTimeMap& f, const SpaceTimeMap& g, const SamplePath& x,
                                   const SamplePath& y, const EpsSchedule& schedule, double t);

// ----------------------------------------------------- deterministic calculus

/// Function sampled on the uniform grid x_i = -T + i dt, i = 0..n, of [-T, 0].
struct WindowFunction {
    double horizon;
    std::vector<double> values;

    std::size_t steps() const { return values.size() - 1; }
    double dt() const { return horizon / static_cast<double>(steps()); }
    /// Cadlag extension: g(0) to the right of 0, 0 to the left of -T.
    double at_extended(std::ptrdiff_t i) const;
};

/// Restriction of a grid path onto [-T, 0] via x -> X_{T + x}.
WindowFunction to_window_function(const SamplePath& path);

struct TwoVarNorm {
    std::vector<double> eps;
    std::vector<double> values;  // int (g(s+eps) - g(s))^2 ds / eps
    double two_var = 0.0;        // sup over the ladder restricted to eps < 1
    double sup_norm = 0.0;
    double v2_norm = 0.0;        // sup_norm + two_var
};

TwoVarNorm two_var_norm(const WindowFunction& g, const std::vector<std::size_t>& eps_multiples);

struct V2PsiCheck {
    bool ok = false;
    double sup_deviation = 0.0;
    double scale = 1.0;
    std::vector<double> x;          // window nodes
    std::vector<double> deviation;  // int_x^0 (dg)^2 / eps - psi(-x)
};

/// Tests [g](x) ~ psi(|x|) on [-T,0] at width eps_multiple * dt. The check
/// passes when sup |deviation| <= tol * max(1, sup psi).
V2PsiCheck v2psi_check(const WindowFunction& g, const std::function<double(double)>& psi, double tol,
                       std::size_t eps_multiple = 2);

/// Left-endpoint value of int_{]a,b]} g(s) (f_J(s+eps) - f_J(s)) / eps ds on
/// `steps` cells, eps = eps_multiple * (b - a) / steps.
double det_forward_integral(const std::function<double(double)>& density, const std::function<double(double)>& f,
                            double a, double b, std::size_t steps, std::size_t eps_multiple);

}  // namespace regcalc
