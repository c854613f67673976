#include "regcalc/chi_window.hpp"

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

// D[s + m] = X_{s+k} - X_s for s = -m..n, with clamped indices.
std::vector<double> shifted_increments(const SamplePath& x, std::size_t m, std::size_t k) {
    const auto n = static_cast<std::ptrdiff_t>(x.grid().steps());
    const auto mm = static_cast<std::ptrdiff_t>(m);
    const auto kk = static_cast<std::ptrdiff_t>(k);
    std::vector<double> d(static_cast<std::size_t>(n + mm + 1));
    for (std::ptrdiff_t s = -mm; s <= n; ++s) d[static_cast<std::size_t>(s + mm)] = x.at_clamped(s + kk) - x.at_clamped(s);
    return d;
}

double weighted_sum(std::span<const double> w, std::span<const double> g, std::size_t m, double dt) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc += w[i] * g[i];
    return acc * dt;
}

void check_density(const std::vector<double>& v, const WindowGrid& wg, const char* what) {
    if (v.size() != wg.node_count()) throw std::invalid_argument(std::string(what) + ": density size != window nodes");
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite density");
}

std::optional<std::vector<double>> add_opt(const std::optional<std::vector<double>>& a,
                                           const std::optional<std::vector<double>>& b) {
    if (!a) return b;
    if (!b) return a;
    if (a->size() != b->size()) throw std::invalid_argument("SquareMeasure: mismatched densities");
    std::vector<double> out(*a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += (*b)[i];
    return out;
}

}  // namespace

WindowGrid::WindowGrid(const Grid& base, double tau) : dt_(base.dt()) {
    if (!(tau > 0.0)) throw std::invalid_argument("window width must be positive");
    const double r = tau / dt_;
    const double m = std::round(r);
    if (m < 1.0 || std::abs(r - m) > 1e-6 * m) throw std::invalid_argument("window width must be a multiple of dt");
    m_ = static_cast<std::size_t>(m);
}

std::vector<double> WindowGrid::sample(const std::function<double(double)>& f) const {
    std::vector<double> v(node_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(node(i));
    return v;
}

std::vector<double> window_at_node(const SamplePath& x, std::size_t j, const WindowGrid& wg) {
    if (std::abs(wg.dt() - x.grid().dt()) > 1e-12 * x.grid().dt())
        throw std::invalid_argument("window grid does not match the path grid");
    std::vector<double> eta(wg.node_count());
    const auto base = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(wg.steps());
    for (std::size_t i = 0; i < eta.size(); ++i) eta[i] = x.at_clamped(base + static_cast<std::ptrdiff_t>(i));
    return eta;
}

std::vector<double> window_at(const SamplePath& x, double t, const WindowGrid& wg) {
    if (!(t >= 0.0 && t <= x.grid().horizon() * (1.0 + 1e-12))) throw std::invalid_argument("t must lie in [0, T]");
    std::vector<double> eta(wg.node_count());
    for (std::size_t i = 0; i < eta.size(); ++i) eta[i] = x.eval_extended(t + wg.node(i));
    return eta;
}

// ---------------------------------------------------------------- measures

SquareMeasure SquareMeasure::dirac(double lambda) {
    SquareMeasure m;
    m.atom = lambda;
    return m;
}

SquareMeasure SquareMeasure::diagonal(std::vector<double> g) {
    SquareMeasure m;
    m.diag = std::move(g);
    return m;
}

SquareMeasure SquareMeasure::constant_diagonal(const WindowGrid& wg, double c) {
    return diagonal(std::vector<double>(wg.node_count(), c));
}

SquareMeasure SquareMeasure::separable(std::vector<double> alpha, std::vector<double> beta, double c) {
    SquareMeasure m;
    m.l2.push_back({c, std::move(alpha), std::move(beta)});
    return m;
}

SquareMeasure SquareMeasure::constant_density(const WindowGrid& wg, double c) {
    std::vector<double> one(wg.node_count(), 1.0);
    return separable(one, one, c);
}

void SquareMeasure::validate(const WindowGrid& wg) const {
    if (atom && !std::isfinite(*atom)) throw std::invalid_argument("SquareMeasure: non-finite atom");
    if (prod_left) check_density(*prod_left, wg, "prod_left");
    if (prod_right) check_density(*prod_right, wg, "prod_right");
    if (diag) check_density(*diag, wg, "diag");
    for (const auto& term : l2) {
        if (!std::isfinite(term.c)) throw std::invalid_argument("l2: non-finite coefficient");
        check_density(term.alpha, wg, "l2");
        check_density(term.beta, wg, "l2");
    }
}

SquareMeasure SquareMeasure::plus(const SquareMeasure& other) const {
    SquareMeasure out;
    if (atom || other.atom) out.atom = atom.value_or(0.0) + other.atom.value_or(0.0);
    out.prod_left = add_opt(prod_left, other.prod_left);
    out.prod_right = add_opt(prod_right, other.prod_right);
    out.diag = add_opt(diag, other.diag);
    out.l2 = l2;
    out.l2.insert(out.l2.end(), other.l2.begin(), other.l2.end());
    return out;
}

SquareMeasure SquareMeasure::scaled(double s) const {
    SquareMeasure out = *this;
    if (out.atom) *out.atom *= s;
    for (auto* v : {&out.prod_left, &out.prod_right, &out.diag})
        if (*v)
            for (auto& x : **v) x *= s;
    for (auto& term : out.l2) term.c *= s;
    return out;
}

double pair_measure_with_square_increment(const SquareMeasure& mu, std::span<const double> g, const WindowGrid& wg) {
    const std::size_t m = wg.steps();
    if (g.size() != wg.node_count()) throw std::invalid_argument("pairing: increment size != window nodes");
    const double dt = wg.dt();
    const double g0 = g[m];
    double acc = 0.0;
    if (mu.atom) acc += *mu.atom * g0 * g0;
    if (mu.prod_left) acc += g0 * weighted_sum(*mu.prod_left, g, m, dt);
    if (mu.prod_right) acc += g0 * weighted_sum(*mu.prod_right, g, m, dt);
    for (const auto& term : mu.l2) acc += term.c * weighted_sum(term.alpha, g, m, dt) * weighted_sum(term.beta, g, m, dt);
    if (mu.diag) {
        double d = 0.0;
        for (std::size_t i = 0; i < m; ++i) d += (*mu.diag)[i] * g[i] * g[i];
        acc += d * dt;
    }
    return acc;
}

std::vector<double> chi_qv_curve(const SquareMeasure& mu, const SamplePath& x, const WindowGrid& wg, std::size_t k) {
    if (std::abs(wg.dt() - x.grid().dt()) > 1e-12 * x.grid().dt())
        throw std::invalid_argument("window grid does not match the path grid");
    if (k == 0) throw std::invalid_argument("chi_qv: eps must be positive");
    mu.validate(wg);
    const std::size_t n = x.grid().steps();
    const std::size_t m = wg.steps();
    const auto d = shifted_increments(x, m, k);
    const double w = 1.0 / static_cast<double>(k);
    std::vector<double> c(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        std::span<const double> g(d.data() + j, m + 1);
        c[j + 1] = c[j] + w * pair_measure_with_square_increment(mu, g, wg);
    }
    return c;
}

double chi_qv_eps(const SquareMeasure& mu, const SamplePath& x, const WindowGrid& wg, double eps, double t) {
    return read_curve(chi_qv_curve(mu, x, wg, width_multiple(x.grid(), eps)), x.grid(), t);
}

EstimateSeries chi_qv(const SquareMeasure& mu, const SamplePath& x, const WindowGrid& wg, const EpsSchedule& schedule,
                      double t) {
    std::vector<double> vals(schedule.size());
    for (std::size_t i = 0; i < schedule.size(); ++i)
        vals[i] = read_curve(chi_qv_curve(mu, x, wg, schedule.multiple(i)), x.grid(), t);
    return make_series(schedule.eps_values(), std::move(vals));
}

double chi_qv_formula(const SquareMeasure& mu, const std::function<double(double)>& qv, const WindowGrid& wg,
                      double t) {
    mu.validate(wg);
    double acc = 0.0;
    if (mu.atom) acc += *mu.atom * qv(t);
    if (mu.diag) {
        const double lo = -t - 1e-12 * std::max(1.0, t);
        double d = 0.0;
        for (std::size_t i = 0; i < wg.steps(); ++i) {
            const double x = wg.node(i);
            if (x >= lo) d += (*mu.diag)[i] * qv(std::max(0.0, t + x));
        }
        acc += d * wg.dt();
    }
    return acc;
}

double diagonal_mass(const SquareMeasure& mu, const WindowGrid& wg, double t) {
    return chi_qv_formula(mu, [](double) { return 1.0; }, wg, t);
}

// ------------------------------------------------------------ functionals

ElementaryFunctional ElementaryFunctional::point_eval(std::function<double(double)> f,
                                                      std::function<double(double)> f1,
                                                      std::function<double(double)> f2) {
    return {Kind::PointEval, std::move(f), std::move(f1), std::move(f2)};
}

ElementaryFunctional ElementaryFunctional::point_square() {
    return point_eval([](double x) { return x * x; }, [](double x) { return 2.0 * x; }, [](double) { return 2.0; });
}

const char* ElementaryFunctional::name() const {
    switch (kind) {
        case Kind::PointEval: return "point";
        case Kind::SquaredMean: return "sqmean";
        case Kind::SquaredNorm: return "sqnorm";
    }
    return "?";
}

double functional_value(const ElementaryFunctional& F, std::span<const double> eta, const WindowGrid& wg) {
    const std::size_t m = wg.steps();
    if (eta.size() != wg.node_count()) throw std::invalid_argument("functional: window size mismatch");
    switch (F.kind) {
        case ElementaryFunctional::Kind::PointEval: return F.f(eta[m]);
        case ElementaryFunctional::Kind::SquaredMean: {
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += eta[i];
            s *= wg.dt();
            return s * s;
        }
        case ElementaryFunctional::Kind::SquaredNorm: {
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += eta[i] * eta[i];
            return s * wg.dt();
        }
    }
    return 0.0;
}

FunctionalDerivatives functional_derivatives(const ElementaryFunctional& F, std::span<const double> eta,
                                             const WindowGrid& wg) {
    FunctionalDerivatives out;
    out.value = functional_value(F, eta, wg);
    const std::size_t m = wg.steps();
    switch (F.kind) {
        case ElementaryFunctional::Kind::PointEval:
            out.first.atom = F.f1(eta[m]);
            out.second = SquareMeasure::dirac(F.f2(eta[m]));
            break;
        case ElementaryFunctional::Kind::SquaredMean: {
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += eta[i];
            s *= wg.dt();
            out.first.density.assign(wg.node_count(), 2.0 * s);
            out.second = SquareMeasure::constant_density(wg, 2.0);
            break;
        }
        case ElementaryFunctional::Kind::SquaredNorm:
            out.first.density.resize(wg.node_count());
            for (std::size_t i = 0; i < eta.size(); ++i) out.first.density[i] = 2.0 * eta[i];
            out.second = SquareMeasure::constant_diagonal(wg, 2.0);
            break;
    }
    return out;
}

double pair_line_measure(const LineMeasure& mu, std::span<const double> h, const WindowGrid& wg) {
    const std::size_t m = wg.steps();
    if (h.size() != wg.node_count()) throw std::invalid_argument("pairing: window size mismatch");
    double acc = mu.atom * h[m];
    if (!mu.density.empty()) acc += weighted_sum(mu.density, h, m, wg.dt());
    return acc;
}

double window_sup_qv_eps(const SamplePath& x, const WindowGrid& wg, double eps, double t) {
    const std::size_t k = width_multiple(x.grid(), eps);
    const std::size_t n = x.grid().steps();
    const std::size_t m = wg.steps();
    const auto d = shifted_increments(x, m, k);
    std::vector<double> c(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double sup = 0.0;
        for (std::size_t i = 0; i <= m; ++i) sup = std::max(sup, std::abs(d[j + i]));
        c[j + 1] = c[j] + sup * sup / static_cast<double>(k);
    }
    return read_curve(c, x.grid(), t);
}

}  // namespace regcalc
