#include "regcalc/ito_verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace regcalc {

namespace {

std::size_t width_multiple(const Grid& grid, double eps) {
    const double r = eps / grid.dt();
    const double k = std::round(r);
    if (!(k >= 1.0) || std::abs(r - k) > 1e-6 * std::max(1.0, k))
        throw std::invalid_argument("eps must be a positive integer multiple of dt");
    return static_cast<std::size_t>(k);
}

struct Curves {
    std::vector<double> lhs, time, forward, perp, second;
};

// Fills the ItoTerms from cumulative curves read at time t.
ItoTerms finish(const Curves& c, const Grid& grid, std::size_t k, double t, double increment,
                const std::function<double(std::size_t)>& increment_at_node) {
    ItoTerms out;
    out.eps = static_cast<double>(k) * grid.dt();
    out.increment = increment;
    out.lhs = read_curve(c.lhs, grid, t);
    out.time_term = c.time.empty() ? 0.0 : read_curve(c.time, grid, t);
    out.forward_term = read_curve(c.forward, grid, t);
    out.perp_term = c.perp.empty() ? 0.0 : read_curve(c.perp, grid, t);
    out.second_order = read_curve(c.second, grid, t);
    out.residual = out.lhs - out.time_term - out.forward_term - out.perp_term - out.second_order;
    out.gap = out.increment - out.lhs;
    const std::size_t n = grid.steps();
    for (std::size_t j = 0; j <= n && grid.time(j) <= t * (1.0 + 1e-12); ++j) {
        const double r = c.lhs[j] - (c.time.empty() ? 0.0 : c.time[j]) - c.forward[j] -
                         (c.perp.empty() ? 0.0 : c.perp[j]) - c.second[j];
        out.sup_residual = std::max(out.sup_residual, std::abs(r));
        out.sup_total = std::max(out.sup_total, std::abs(increment_at_node(j) - c.lhs[j] + r));
    }
    return out;
}

}  // namespace

C12Function C12Function::square() {
    return {"x^2", [](double, double x) { return x * x; }, [](double, double) { return 0.0; },
            [](double, double x) { return 2.0 * x; }, [](double, double) { return 2.0; }};
}

C12Function C12Function::half_square() {
    return {"x^2/2", [](double, double x) { return 0.5 * x * x; }, [](double, double) { return 0.0; },
            [](double, double x) { return x; }, [](double, double) { return 1.0; }};
}

C12Function C12Function::time_times_x() {
    return {"tx", [](double t, double x) { return t * x; }, [](double, double x) { return x; },
            [](double t, double) { return t; }, [](double, double) { return 0.0; }};
}

C12Function C12Function::sine() {
    return {"sin", [](double, double x) { return std::sin(x); }, [](double, double) { return 0.0; },
            [](double, double x) { return std::cos(x); }, [](double, double x) { return -std::sin(x); }};
}

C12Function C12Function::affine(double a, double b, double c) {
    return {"affine", [=](double t, double x) { return a + b * x + c * t; }, [=](double, double) { return c; },
            [=](double, double) { return b; }, [](double, double) { return 0.0; }};
}

ItoTerms chain_rule_terms(const C12Function& F, std::span<const double> z, const SamplePath& x, std::size_t k,
                          double t) {
    const Grid& grid = x.grid();
    const std::size_t n = grid.steps();
    if (z.size() != n + 1) throw std::invalid_argument("chain rule: Z must be grid-sampled");
    if (k == 0) throw std::invalid_argument("chain rule: eps must be positive");
    std::vector<double> y(n + 1), zfx(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        y[j] = F.f(grid.time(j), x[j]);
        zfx[j] = z[j] * F.fx(grid.time(j), x[j]);
    }
    // Y_{r+eps} = F(r + eps, X_{r+eps}): only X is frozen past T, time keeps running.
    Curves c;
    c.lhs.assign(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double ahead = F.f(grid.time(j) + static_cast<double>(k) * grid.dt(), x[std::min(j + k, n)]);
        c.lhs[j + 1] = c.lhs[j] + z[j] * (ahead - y[j]) / static_cast<double>(k);
    }
    c.forward = forward_curve(zfx, x, k);
    const auto qv = covariation_curve(x, x, k);
    c.time.assign(n + 1, 0.0);
    c.second.assign(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double tj = grid.time(j);
        c.time[j + 1] = c.time[j] + grid.dt() * z[j] * F.ft(tj, x[j]);
        c.second[j + 1] = c.second[j] + 0.5 * z[j] * F.fxx(tj, x[j]) * (qv[j + 1] - qv[j]);
    }
    const double inc = F.f(t, x.eval_extended(t)) - y[0];
    return finish(c, grid, k, t, inc, [&](std::size_t j) { return y[j] - y[0]; });
}

double chain_rule_residual(const C12Function& F, std::span<const double> z, const SamplePath& x, double eps, double t) {
    return chain_rule_terms(F, z, x, width_multiple(x.grid(), eps), t).residual;
}

ItoTerms ito_terms(const C12Function& F, const SamplePath& x, std::size_t k, double t) {
    const std::vector<double> one(x.size(), 1.0);
    return chain_rule_terms(F, one, x, k, t);
}

double ito_residual(const C12Function& F, const SamplePath& x, double eps, double t) {
    return ito_terms(F, x, width_multiple(x.grid(), eps), t).residual;
}

ItoReport ito_report(const C12Function& F, const SamplePath& x, const EpsSchedule& schedule, double t,
                     double tolerance) {
    ItoReport rep;
    rep.name = F.name;
    rep.tolerance = tolerance;
    for (std::size_t i = 0; i < schedule.size(); ++i) rep.levels.push_back(ito_terms(F, x, schedule.multiple(i), t));
    const auto& last = rep.levels.back();
    rep.passed = std::abs(last.residual + last.gap) <= tolerance;
    return rep;
}

ItoTerms banach_ito_terms(const ElementaryFunctional& F, const SamplePath& x, const WindowGrid& wg, std::size_t k,
                          double t) {
    const Grid& grid = x.grid();
    const std::size_t n = grid.steps();
    const std::size_t m = wg.steps();
    if (k == 0) throw std::invalid_argument("banach ito: eps must be positive");
    if (std::abs(wg.dt() - grid.dt()) > 1e-12 * grid.dt())
        throw std::invalid_argument("window grid does not match the path grid");

    // F on the windows of the extended process at nodes 0..n+k-1.
    std::vector<double> fv(n + k);
    for (std::size_t j = 0; j < fv.size(); ++j) fv[j] = functional_value(F, window_at_node(x, j, wg), wg);

    Curves c;
    c.lhs.assign(n + 1, 0.0);
    c.forward.assign(n + 1, 0.0);
    c.perp.assign(n + 1, 0.0);
    c.second.assign(n + 1, 0.0);
    const double w = 1.0 / static_cast<double>(k);
    std::vector<double> delta(m + 1);
    for (std::size_t j = 0; j < n; ++j) {
        const auto eta = window_at_node(x, j, wg);
        const auto base = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(m);
        for (std::size_t i = 0; i <= m; ++i) {
            const auto s = base + static_cast<std::ptrdiff_t>(i);
            delta[i] = x.at_clamped(s + static_cast<std::ptrdiff_t>(k)) - x.at_clamped(s);
        }
        const auto d = functional_derivatives(F, eta, wg);
        c.lhs[j + 1] = c.lhs[j] + w * (fv[j + k] - fv[j]);
        c.forward[j + 1] = c.forward[j] + w * d.first.atom * delta[m];
        c.perp[j + 1] = c.perp[j] + w * pair_line_measure({0.0, d.first.density}, delta, wg);
        c.second[j + 1] = c.second[j] + w * 0.5 * pair_measure_with_square_increment(d.second, delta, wg);
    }
    const double inc = functional_value(F, window_at(x, t, wg), wg) - fv[0];
    return finish(c, grid, k, t, inc, [&](std::size_t j) { return fv[j] - fv[0]; });
}

ItoReport banach_ito_residual(const ElementaryFunctional& F, const SamplePath& x, const WindowGrid& wg,
                              const EpsSchedule& schedule, double t, double tolerance) {
    ItoReport rep;
    rep.name = F.name();
    rep.tolerance = tolerance;
    for (std::size_t i = 0; i < schedule.size(); ++i)
        rep.levels.push_back(banach_ito_terms(F, x, wg, schedule.multiple(i), t));
    const auto& last = rep.levels.back();
    rep.passed = std::abs(last.residual + last.gap) <= tolerance;
    return rep;
}

}  // namespace regcalc
