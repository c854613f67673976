#pragma once

#include "regcalc/chi_window.hpp"
#include "regcalc/estimators.hpp"
#include "regcalc/grid_paths.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace regcalc {

struct VanillaPayoff {
    std::string id;
    std::function<double(double)> f;
    std::function<double(double)> fprime;  // optional; finite differences otherwise
    double sigma = 1.0;
    double growth_c = 1.0;  // |f(x)| <= C (1 + |x|^p)
    double growth_p = 2.0;

    static VanillaPayoff linear(double sigma);
    static VanillaPayoff square(double sigma);
    /// Call (x - K)^+.
    static VanillaPayoff call(double strike, double sigma);
    /// Linear interpolation through (x_i, y_i), flat extrapolation.
    static VanillaPayoff table(std::vector<double> xs, std::vector<double> ys, double sigma);
    /// Parses "linear", "square", "call:K".
    static VanillaPayoff parse(const std::string& spec, double sigma);

    void validate() const;
};

/// v(t, x) = E f(x + sigma sqrt(T - t) Z), by Gauss-Hermite quadrature.
/// Space derivatives use Stein weights, so no differentiation of f is needed
/// away from T.
class VanillaSolution {
public:
    VanillaSolution(VanillaPayoff payoff, double horizon, std::size_t order = 64);

    double value(double t, double x) const;
    double dx(double t, double x) const;
    double dxx(double t, double x) const;
    /// From the PDE: -sigma^2/2 v_xx.
    double dt(double t, double x) const;
    /// Finite-difference v_t + sigma^2/2 v_xx, the heat residual.
    double heat_residual(double t, double x, double h = 1e-4) const;

    const VanillaPayoff& payoff() const { return payoff_; }
    double horizon() const { return horizon_; }
    std::size_t order() const { return nodes_.size(); }
    /// False when orders N and N/2 disagree at the probe points.
    bool converged() const { return converged_; }

private:
    double expect(double t, double x, int weight) const;
    double fprime(double x) const;
    double fsecond(double x) const;

    VanillaPayoff payoff_;
    double horizon_;
    std::vector<double> nodes_, weights_;  // standard normal nodes/weights
    bool converged_ = true;
};

VanillaSolution solve_vanilla(const VanillaPayoff& payoff, double horizon, std::size_t order = 64);

/// Gauss-Hermite rule for the standard normal (probabilists' weight),
/// computed with Eigen's symmetric eigensolver (Golub-Welsch).
void gauss_hermite_normal(std::size_t order, std::vector<double>& nodes, std::vector<double>& weights);

/// Path-dependent value function. Implementations see only the path prefix
/// X_0..X_j, so the hedge is adapted by construction.
class HedgeProvider {
public:
    virtual ~HedgeProvider() = default;
    virtual double value(double t, std::span<const double> prefix, const Grid& grid) const = 0;
    virtual double delta(double t, std::span<const double> prefix, const Grid& grid) const = 0;
};

/// u(t, eta) = v(t, eta(0)); Du = v_x delta0, D^2 u = v_xx delta0 (x) delta0.
class LiftedVanilla : public HedgeProvider {
public:
    explicit LiftedVanilla(std::shared_ptr<const VanillaSolution> v) : v_(std::move(v)) {}
    double value(double t, std::span<const double> prefix, const Grid&) const override {
        return v_->value(t, prefix.back());
    }
    double delta(double t, std::span<const double> prefix, const Grid&) const override {
        return v_->dx(t, prefix.back());
    }
    /// u on a window sample.
    double value_on_window(double t, std::span<const double> eta) const { return v_->value(t, eta.back()); }
    FunctionalDerivatives derivatives(double t, std::span<const double> eta) const;
    /// d_t u + sigma^2/2 <D^2 u, 1_{D_t}>, with d_t u by central differences.
    double evanilla_residual(double t, std::span<const double> eta, const WindowGrid& wg, double h = 1e-4) const;
    const VanillaSolution& solution() const { return *v_; }

private:
    std::shared_ptr<const VanillaSolution> v_;
};

std::shared_ptr<LiftedVanilla> lift_to_window(std::shared_ptr<const VanillaSolution> v);

/// xi_j = D^{delta0} u(t_j, X_{t_j}(.)) for j = 0..n.
std::vector<double> hedge_process(const HedgeProvider& u, const SamplePath& x);

struct PathHedge {
    std::size_t path_id = 0;
    double h = 0.0;
    double g0 = 0.0;
    double hedge_integral = 0.0;
    double residual = 0.0;
};

struct HedgeReport {
    std::string model;
    std::vector<PathHedge> paths;
    SampleStats abs_residual;
    SampleStats abs_payoff;
    double relative_error = 0.0;  // mean |residual| / mean |h|
    bool improper = false;        // integral taken with the delta ladder
    bool diverging = false;       // any path flagged divergence
    bool qv_warning = false;      // pre-flight v2psi check failed
    double qv_deviation = 0.0;
};

struct ReplicateOptions {
    std::size_t paths = 200;
    std::uint64_t seed = 1;
    double qv_tolerance = 0.10;
};

/// Decides whether the hedge needs an improper integral: compares sup|v_x|
/// on a probe grid at T - 2 dt against T - 16 dt.
bool needs_improper_integral(const VanillaSolution& v, const Grid& grid);

HedgeReport replicate_payoff(const VanillaSolution& v, const ProcessSpec& model, const Grid& grid,
                             const EpsSchedule& schedule, const ReplicateOptions& opts);

struct ConditionCProbe {
    std::vector<double> eps;
    std::vector<double> values;  // I(t, eta, eps)
    double sup = 0.0;
    bool exceeds_bound = false;
};

/// I(t, eta, eps) = int_{-t}^0 D^perp_x u(t, eta) (eta(x + eps) - eta(x)) / eps dx
/// for the D^perp density given as a function of (x, eta(x)).
ConditionCProbe condition_c_probe(const std::function<double(double, double)>& dperp, const WindowFunction& eta,
                                  double t, const std::vector<std::size_t>& eps_multiples,
                                  std::optional<double> bound = std::nullopt);

}  // namespace regcalc
