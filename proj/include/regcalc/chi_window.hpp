#pragma once

#include "regcalc/estimators.hpp"
#include "regcalc/grid_paths.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace regcalc {

/// Nodes u_i = -tau + i*dt, i = 0..m, of the window [-tau, 0]. The window grid
/// is the base grid shifted, so tau must be a multiple of dt.
class WindowGrid {
public:
    WindowGrid(const Grid& base, double tau);
    static WindowGrid full(const Grid& base) { return WindowGrid(base, base.horizon()); }

    std::size_t steps() const { return m_; }
    std::size_t node_count() const { return m_ + 1; }
    double dt() const { return dt_; }
    double tau() const { return static_cast<double>(m_) * dt_; }
    double node(std::size_t i) const { return -tau() + static_cast<double>(i) * dt_; }

    /// Samples f on the nodes.
    std::vector<double> sample(const std::function<double(double)>& f) const;

private:
    std::size_t m_;
    double dt_;
};

/// eta_t(u) = X_{t+u} on the window nodes, with the end-value extension.
std::vector<double> window_at(const SamplePath& x, double t, const WindowGrid& wg);
/// Same, for the grid node t_j (no interpolation).
std::vector<double> window_at_node(const SamplePath& x, std::size_t j, const WindowGrid& wg);

/// One term c * alpha(x) beta(y) of a low-rank L2 density.
struct SeparableTerm {
    double c = 1.0;
    std::vector<double> alpha;
    std::vector<double> beta;
};

/// Element of the direct sum
///   R delta0 x delta0  +  L2 x D0  +  D0 x L2  +  L2([-T,0]^2)  +  Diag.
/// Densities are sampled on a WindowGrid; the L2 density is kept in
/// separable form so that pairings cost O(m).
struct SquareMeasure {
    std::optional<double> atom;
    std::optional<std::vector<double>> prod_left;   // a(x) dx (x) delta0
    std::optional<std::vector<double>> prod_right;  // delta0 (x) b(y) dy
    std::vector<SeparableTerm> l2;
    std::optional<std::vector<double>> diag;        // g(x) delta_y(dx) dy

    static SquareMeasure dirac(double lambda = 1.0);
    static SquareMeasure diagonal(std::vector<double> g);
    static SquareMeasure constant_diagonal(const WindowGrid& wg, double c);
    static SquareMeasure separable(std::vector<double> alpha, std::vector<double> beta, double c = 1.0);
    static SquareMeasure constant_density(const WindowGrid& wg, double c);

    void validate(const WindowGrid& wg) const;
    /// mu + other, component by component.
    SquareMeasure plus(const SquareMeasure& other) const;
    SquareMeasure scaled(double s) const;
};

/// <mu, g (x) g> for g sampled on the window nodes; integrals over [-tau, 0]
/// use the left-endpoint rule.
double pair_measure_with_square_increment(const SquareMeasure& mu, std::span<const double> g, const WindowGrid& wg);

/// (1/eps) int_0^t <mu, (X_{r+eps}(.) - X_r(.))^{(x)2}> dr, left-endpoint in r.
double chi_qv_eps(const SquareMeasure& mu, const SamplePath& x, const WindowGrid& wg, double eps, double t);
/// Cumulative version: C[J] for J = 0..n at width k*dt.
std::vector<double> chi_qv_curve(const SquareMeasure& mu, const SamplePath& x, const WindowGrid& wg, std::size_t k);
EstimateSeries chi_qv(const SquareMeasure& mu, const SamplePath& x, const WindowGrid& wg, const EpsSchedule& schedule,
                      double t);

/// Closed form int_{D_t} dmu(x,y) [X]_{t+x}, where D_t = {(x,x) : -t <= x <= 0}.
/// Atom -> lambda [X]_t, Diag(g) -> int_{-t}^0 g(x) [X]_{t+x} dx; the product
/// and L2 components carry no mass on the diagonal.
double chi_qv_formula(const SquareMeasure& mu, const std::function<double(double)>& qv, const WindowGrid& wg, double t);

/// <mu, 1_{D_t}>: the diagonal mass of mu over [-t, 0].
double diagonal_mass(const SquareMeasure& mu, const WindowGrid& wg, double t);

/// Signed measure on [-T, 0]: atom at 0 plus a density.
struct LineMeasure {
    double atom = 0.0;
    std::vector<double> density;  // empty means zero
};

struct ElementaryFunctional {
    enum class Kind { PointEval, SquaredMean, SquaredNorm };
    Kind kind = Kind::PointEval;
    // PointEval only: f, f', f''.
    std::function<double(double)> f, f1, f2;

    static ElementaryFunctional point_eval(std::function<double(double)> f, std::function<double(double)> f1,
                                           std::function<double(double)> f2);
    static ElementaryFunctional point_square();
    static ElementaryFunctional squared_mean() { return {Kind::SquaredMean, {}, {}, {}}; }
    static ElementaryFunctional squared_norm() { return {Kind::SquaredNorm, {}, {}, {}}; }
    const char* name() const;
};

struct FunctionalDerivatives {
    double value = 0.0;
    LineMeasure first;
    SquareMeasure second;
};

double functional_value(const ElementaryFunctional& F, std::span<const double> eta, const WindowGrid& wg);
FunctionalDerivatives functional_derivatives(const ElementaryFunctional& F, std::span<const double> eta,
                                             const WindowGrid& wg);

/// <DF, h> for a window function h, left-endpoint rule for the density.
double pair_line_measure(const LineMeasure& m, std::span<const double> h, const WindowGrid& wg);

/// Scalar regularized QV of the window process in sup norm,
/// (1/eps) int_0^t ||X_{r+eps}(.) - X_r(.)||_inf^2 dr. For Brownian windows it
/// grows without bound as eps -> 0; exposed only as a diagnostic.
double window_sup_qv_eps(const SamplePath& x, const WindowGrid& wg, double eps, double t);

}  // namespace regcalc
