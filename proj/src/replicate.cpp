#include "regcalc/replicate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace regcalc {

// ----------------------------------------------------------------- payoffs

VanillaPayoff VanillaPayoff::linear(double sigma) {
    return {"linear", [](double x) { return x; }, [](double) { return 1.0; }, sigma, 1.0, 1.0};
}

VanillaPayoff VanillaPayoff::square(double sigma) {
    return {"square", [](double x) { return x * x; }, [](double x) { return 2.0 * x; }, sigma, 1.0, 2.0};
}

VanillaPayoff VanillaPayoff::call(double strike, double sigma) {
    return {"call:" + format_real(strike), [strike](double x) { return std::max(0.0, x - strike); },
            [strike](double x) { return x > strike ? 1.0 : 0.0; }, sigma, 1.0 + std::abs(strike), 1.0};
}

VanillaPayoff VanillaPayoff::table(std::vector<double> xs, std::vector<double> ys, double sigma) {
    if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("payoff table needs >= 2 points");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("payoff table abscissae must increase");
    double ymax = 0.0;
    for (double y : ys) ymax = std::max(ymax, std::abs(y));
    auto f = [xs, ys](double x) {
        if (x <= xs.front()) return ys.front();
        if (x >= xs.back()) return ys.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const auto i = static_cast<std::size_t>(it - xs.begin()) - 1;
        const double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
        return (1.0 - w) * ys[i] + w * ys[i + 1];
    };
    return {"table", f, {}, sigma, ymax, 0.0};
}

VanillaPayoff VanillaPayoff::parse(const std::string& spec, double sigma) {
    if (spec == "linear") return linear(sigma);
    if (spec == "square") return square(sigma);
    if (spec.rfind("call:", 0) == 0) {
        std::size_t pos = 0;
        const std::string k = spec.substr(5);
        double strike = 0.0;
        try {
            strike = std::stod(k, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != k.size()) throw std::invalid_argument("bad strike in payoff '" + spec + "'");
        return call(strike, sigma);
    }
    throw std::invalid_argument("unknown payoff '" + spec + "' (expected linear, square or call:K)");
}

void VanillaPayoff::validate() const {
    if (!f) throw std::invalid_argument("payoff: missing function");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("payoff: sigma must be >= 0");
    for (double x = -50.0; x <= 50.0; x += 0.5) {
        const double y = f(x);
        if (!std::isfinite(y)) throw std::invalid_argument("payoff: non-finite value at x = " + format_real(x));
        if (std::abs(y) > growth_c * (1.0 + std::pow(std::abs(x), growth_p)) * (1.0 + 1e-9))
            throw std::invalid_argument("payoff '" + id + "' violates its declared polynomial growth");
    }
}

// ------------------------------------------------------------ Gauss-Hermite

void gauss_hermite_normal(std::size_t order, std::vector<double>& nodes, std::vector<double>& weights) {
    if (order < 2) throw std::invalid_argument("Gauss-Hermite order must be >= 2");
    const auto n = static_cast<Eigen::Index>(order);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(static_cast<double>(i));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success) throw NumericalError("Gauss-Hermite eigen-decomposition failed");
    nodes.resize(order);
    weights.resize(order);
    for (Eigen::Index i = 0; i < n; ++i) {
        nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        weights[static_cast<std::size_t>(i)] = v * v;
    }
}

// ---------------------------------------------------------- vanilla solve

VanillaSolution::VanillaSolution(VanillaPayoff payoff, double horizon, std::size_t order)
    : payoff_(std::move(payoff)), horizon_(horizon) {
    payoff_.validate();
    if (!(horizon > 0.0)) throw std::invalid_argument("vanilla solve: horizon must be positive");
    gauss_hermite_normal(order, nodes_, weights_);

    // Oscillation test: halve the order and compare at a few probes.
    if (order >= 8 && payoff_.sigma > 0.0) {
        std::vector<double> hn, hw;
        gauss_hermite_normal(order / 2, hn, hw);
        const double s = payoff_.sigma * std::sqrt(horizon_);
        for (double x : {-1.0, 0.0, 1.0}) {
            double a = 0.0, b = 0.0;
            for (std::size_t i = 0; i < nodes_.size(); ++i) a += weights_[i] * payoff_.f(x + s * nodes_[i]);
            for (std::size_t i = 0; i < hn.size(); ++i) b += hw[i] * payoff_.f(x + s * hn[i]);
            if (std::abs(a - b) > 1e-3 * std::max(1.0, std::abs(a))) converged_ = false;
        }
    }
}

double VanillaSolution::fprime(double x) const {
    if (payoff_.fprime) return payoff_.fprime(x);
    const double h = 1e-5 * std::max(1.0, std::abs(x));
    return (payoff_.f(x + h) - payoff_.f(x - h)) / (2.0 * h);
}

double VanillaSolution::fsecond(double x) const {
    const double h = 1e-4 * std::max(1.0, std::abs(x));
    return (payoff_.f(x + h) - 2.0 * payoff_.f(x) + payoff_.f(x - h)) / (h * h);
}

double VanillaSolution::expect(double t, double x, int weight) const {
    const double tau = std::max(0.0, horizon_ - t);
    const double s = payoff_.sigma * std::sqrt(tau);
    if (s < 1e-10) {
        if (weight == 0) return payoff_.f(x);
        return weight == 1 ? fprime(x) : fsecond(x);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double z = nodes_[i];
        const double fz = payoff_.f(x + s * z);
        const double w = weight == 0 ? 1.0 : (weight == 1 ? z : z * z - 1.0);
        acc += weights_[i] * fz * w;
    }
    if (weight == 1) acc /= s;
    if (weight == 2) acc /= s * s;
    return acc;
}

double VanillaSolution::value(double t, double x) const { return expect(t, x, 0); }
double VanillaSolution::dx(double t, double x) const { return expect(t, x, 1); }
double VanillaSolution::dxx(double t, double x) const { return expect(t, x, 2); }
double VanillaSolution::dt(double t, double x) const { return -0.5 * payoff_.sigma * payoff_.sigma * dxx(t, x); }

double VanillaSolution::heat_residual(double t, double x, double h) const {
    const double lo = std::max(0.0, t - h);
    const double hi = std::min(horizon_, t + h);
    if (!(hi > lo)) throw std::invalid_argument("heat residual: step too small");
    const double vt = (value(hi, x) - value(lo, x)) / (hi - lo);
    const double hx = 1e-3 * std::max(1.0, std::abs(x));
    const double vxx = (value(t, x + hx) - 2.0 * value(t, x) + value(t, x - hx)) / (hx * hx);
    return vt + 0.5 * payoff_.sigma * payoff_.sigma * vxx;
}

VanillaSolution solve_vanilla(const VanillaPayoff& payoff, double horizon, std::size_t order) {
    return VanillaSolution(payoff, horizon, order);
}

// ------------------------------------------------------------ window lift

FunctionalDerivatives LiftedVanilla::derivatives(double t, std::span<const double> eta) const {
    FunctionalDerivatives d;
    const double x = eta.back();
    d.value = v_->value(t, x);
    d.first.atom = v_->dx(t, x);
    d.second = SquareMeasure::dirac(v_->dxx(t, x));
    return d;
}

double LiftedVanilla::evanilla_residual(double t, std::span<const double> eta, const WindowGrid& wg, double h) const {
    const double lo = std::max(0.0, t - h);
    const double hi = std::min(v_->horizon(), t + h);
    const double ut = (value_on_window(hi, eta) - value_on_window(lo, eta)) / (hi - lo);
    const double s = v_->payoff().sigma;
    return ut + 0.5 * s * s * diagonal_mass(derivatives(t, eta).second, wg, t);
}

std::shared_ptr<LiftedVanilla> lift_to_window(std::shared_ptr<const VanillaSolution> v) {
    return std::make_shared<LiftedVanilla>(std::move(v));
}

std::vector<double> hedge_process(const HedgeProvider& u, const SamplePath& x) {
    const Grid& g = x.grid();
    std::vector<double> xi(x.size());
    const auto vals = x.values();
    for (std::size_t j = 0; j < xi.size(); ++j) xi[j] = u.delta(g.time(j), vals.first(j + 1), g);
    return xi;
}

// ------------------------------------------------------------ replication

bool needs_improper_integral(const VanillaSolution& v, const Grid& grid) {
    const double spread = 5.0 * std::max(1.0, v.payoff().sigma * std::sqrt(grid.horizon()));
    auto sup_dx = [&](double t) {
        double s = 0.0;
        for (int i = -100; i <= 100; ++i) s = std::max(s, std::abs(v.dx(t, spread * i / 100.0)));
        return s;
    };
    const double near = sup_dx(grid.horizon() - 2.0 * grid.dt());
    const double far = sup_dx(grid.horizon() - 16.0 * grid.dt());
    return near > 1.5 * std::max(far, 1e-300);
}

HedgeReport replicate_payoff(const VanillaSolution& v, const ProcessSpec& model, const Grid& grid,
                             const EpsSchedule& schedule, const ReplicateOptions& opts) {
    if (opts.paths == 0) throw std::invalid_argument("replicate: need at least one path");
    if (std::abs(v.horizon() - grid.horizon()) > 1e-12 * grid.horizon())
        throw std::invalid_argument("replicate: solution horizon differs from the grid horizon");
    const auto rate = declared_qv_rate(model);
    const double s2 = v.payoff().sigma * v.payoff().sigma;
    if (!rate || std::abs(*rate - s2) > 1e-9 * std::max(1.0, s2))
        throw std::invalid_argument("replicate: model '" + model.label() + "' does not declare [X]_t = sigma^2 t");

    HedgeReport rep;
    rep.model = model.label();
    rep.improper = needs_improper_integral(v, grid);
    const PathEnsemble ens(model, grid, opts.paths, opts.seed);
    const LiftedVanilla u(std::make_shared<const VanillaSolution>(v));
    const std::size_t n = grid.steps();

    rep.paths.resize(opts.paths);
    std::vector<char> diverged(opts.paths, 0);
    parallel_for(opts.paths, [&](std::size_t p) {
        const SamplePath x = ens.path(p);
        const auto xi = hedge_process(u, x);
        PathHedge& ph = rep.paths[p];
        ph.path_id = p;
        ph.h = v.payoff().f(x[n]);
        ph.g0 = v.value(0.0, x[0]);
        if (rep.improper) {
            const auto imp = improper_forward_integral(xi, x, schedule);
            ph.hedge_integral = imp.series.extrapolated;
            diverged[p] = imp.diverging ? 1 : 0;
        } else {
            ph.hedge_integral = forward_curve(xi, x, schedule.smallest_multiple())[n];
        }
        ph.residual = ph.h - ph.g0 - ph.hedge_integral;
        if (!std::isfinite(ph.residual)) throw NumericalError("replicate: non-finite residual");
    });
    rep.diverging = std::any_of(diverged.begin(), diverged.end(), [](char c) { return c != 0; });

    std::vector<double> ar(opts.paths), ah(opts.paths);
    for (std::size_t p = 0; p < opts.paths; ++p) {
        ar[p] = std::abs(rep.paths[p].residual);
        ah[p] = std::abs(rep.paths[p].h);
    }
    rep.abs_residual = sample_stats(ar);
    rep.abs_payoff = sample_stats(ah);
    rep.relative_error = rep.abs_residual.mean / std::max(rep.abs_payoff.mean, 1e-300);

    // Pre-flight: the model should realize [X]_t = sigma^2 t on its paths.
    const auto chk = v2psi_check(to_window_function(ens.path(0)), [s2](double r) { return s2 * r; }, opts.qv_tolerance,
                                 schedule.smallest_multiple());
    rep.qv_warning = !chk.ok;
    rep.qv_deviation = chk.sup_deviation;
    return rep;
}

ConditionCProbe condition_c_probe(const std::function<double(double, double)>& dperp, const WindowFunction& eta,
                                  double t, const std::vector<std::size_t>& eps_multiples, std::optional<double> bound) {
    if (!(t >= 0.0 && t <= eta.horizon * (1.0 + 1e-12))) throw std::invalid_argument("condition C: t out of range");
    const std::size_t n = eta.steps();
    const double dt = eta.dt();
    ConditionCProbe out;
    for (std::size_t k : eps_multiples) {
        if (k == 0) throw std::invalid_argument("condition C: eps must be positive");
        const double eps = static_cast<double>(k) * dt;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = -eta.horizon + static_cast<double>(i) * dt;
            if (x < -t - 1e-12) continue;
            const double inc = eta.at_extended(static_cast<std::ptrdiff_t>(i + k)) - eta.values[i];
            acc += dt * dperp(x, eta.values[i]) * inc / eps;
        }
        out.eps.push_back(eps);
        out.values.push_back(acc);
        out.sup = std::max(out.sup, std::abs(acc));
    }
    out.exceeds_bound = bound.has_value() && out.sup > *bound;
    return out;
}

}  // namespace regcalc
