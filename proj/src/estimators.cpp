#include "regcalc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace regcalc {

namespace {

std::size_t eps_to_multiple(const Grid& grid, double eps) {
    const double ratio = eps / grid.dt();
    const double k = std::round(ratio);
    if (!(k >= 1.0) || std::abs(ratio - k) > 1e-6 * std::max(1.0, k))
        throw std::invalid_argument("eps must be a positive integer multiple of dt");
    return static_cast<std::size_t>(k);
}

void require_same_grid(const SamplePath& a, const SamplePath& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("paths live on different grids");
}

void require_time(const Grid& grid, double t) {
    if (!(t >= 0.0 && t <= grid.horizon() * (1.0 + 1e-12)))
        throw std::invalid_argument("t must lie in [0, T]");
}

}  // namespace

EpsSchedule::EpsSchedule(const Grid& grid, std::vector<std::size_t> multiples)
    : multiples_(std::move(multiples)), dt_(grid.dt()) {
    if (multiples_.empty()) throw std::invalid_argument("EpsSchedule: empty ladder");
    for (std::size_t i = 0; i < multiples_.size(); ++i) {
        if (multiples_[i] < 2) throw std::invalid_argument("EpsSchedule: every eps must be at least 2*dt");
        if (i > 0 && multiples_[i] >= multiples_[i - 1])
            throw std::invalid_argument("EpsSchedule: ladder must be strictly decreasing");
        if (multiples_[i] > grid.steps()) throw std::invalid_argument("EpsSchedule: eps exceeds the horizon");
    }
}

EpsSchedule EpsSchedule::standard(const Grid& grid) { return EpsSchedule(grid, {64, 32, 16, 8, 4, 2}); }

std::vector<double> EpsSchedule::eps_values() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = eps(i);
    return out;
}

EstimateSeries make_series(std::vector<double> eps, std::vector<double> values) {
    if (eps.size() != values.size() || eps.empty())
        throw std::invalid_argument("make_series: eps and values must match and be non-empty");
    for (double v : values)
        if (!std::isfinite(v)) throw NumericalError("make_series: non-finite estimate");
    EstimateSeries s;
    s.eps = std::move(eps);
    s.values = std::move(values);
    const std::size_t n = s.values.size();
    if (n >= 2) {
        const std::size_t used = std::min<std::size_t>(3, n);
        std::span<const double> xe(s.eps.data() + (n - used), used);
        std::span<const double> ye(s.values.data() + (n - used), used);
        s.extrapolated = fit_line(xe, ye).intercept;
        bool up = true, down = true;
        for (std::size_t i = 1; i < n; ++i) {
            up = up && s.values[i] >= s.values[i - 1];
            down = down && s.values[i] <= s.values[i - 1];
        }
        s.monotone = up || down;
        const double denom = std::max(std::abs(s.values[n - 1]), 1e-300);
        s.last_rel_change = std::abs(s.values[n - 1] - s.values[n - 2]) / denom;
    } else {
        s.extrapolated = s.values[0];
    }
    return s;
}

EnsembleSeries reduce_series(std::vector<EstimateSeries> per_path) {
    if (per_path.empty()) throw std::invalid_argument("reduce_series: no paths");
    EnsembleSeries e;
    e.eps = per_path.front().eps;
    const std::size_t ne = e.eps.size();
    e.mean.resize(ne);
    e.stderr_.resize(ne);
    e.mad.resize(ne);
    std::vector<double> column(per_path.size());
    for (std::size_t i = 0; i < ne; ++i) {
        for (std::size_t p = 0; p < per_path.size(); ++p) {
            if (per_path[p].values.size() != ne) throw std::invalid_argument("reduce_series: ragged series");
            column[p] = per_path[p].values[i];
        }
        const auto st = sample_stats(column);
        e.mean[i] = st.mean;
        e.stderr_[i] = st.stderr_;
        e.mad[i] = median_abs_deviation(column);
    }
    for (std::size_t p = 0; p < per_path.size(); ++p) column[p] = per_path[p].extrapolated;
    e.extrapolated = sample_stats(column);
    e.per_path = std::move(per_path);
    return e;
}

// ------------------------------------------------------------------ kernels

std::vector<double> covariation_curve(const SamplePath& x, const SamplePath& y, std::size_t k) {
    require_same_grid(x, y);
    const std::size_t n = x.grid().steps();
    const double w = x.grid().dt() / (static_cast<double>(k) * x.grid().dt());
    std::vector<double> c(n + 1, 0.0);
    const auto xs = x.values();
    const auto ys = y.values();
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jk = std::min(n, j + k);
        c[j + 1] = c[j] + w * (xs[jk] - xs[j]) * (ys[jk] - ys[j]);
    }
    return c;
}

std::vector<double> forward_curve(std::span<const double> integrand, const SamplePath& x, std::size_t k) {
    const std::size_t n = x.grid().steps();
    if (integrand.size() != n + 1) throw std::invalid_argument("forward integral: integrand must be grid-sampled");
    const double w = 1.0 / static_cast<double>(k);
    std::vector<double> c(n + 1, 0.0);
    const auto xs = x.values();
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jk = std::min(n, j + k);
        c[j + 1] = c[j] + w * integrand[j] * (xs[jk] - xs[j]);
    }
    return c;
}

double read_curve(const std::vector<double>& curve, const Grid& grid, double t) {
    const std::size_t n = grid.steps();
    if (t <= 0.0) return curve[0];
    if (t >= grid.horizon()) return curve[n];
    const double s = t / grid.dt();
    auto j = static_cast<std::size_t>(std::floor(s));
    if (j >= n) return curve[n];
    const double frac = s - static_cast<double>(j);
    if (frac == 0.0) return curve[j];
    return curve[j] + frac * (curve[j + 1] - curve[j]);
}

// ---------------------------------------------------------------- operations

double covariation_eps(const SamplePath& x, const SamplePath& y, double eps, double t) {
    require_same_grid(x, y);
    require_time(x.grid(), t);
    const auto k = eps_to_multiple(x.grid(), eps);
    return read_curve(covariation_curve(x, y, k), x.grid(), t);
}

EstimateSeries covariation(const SamplePath& x, const SamplePath& y, const EpsSchedule& schedule, double t) {
    require_same_grid(x, y);
    require_time(x.grid(), t);
    std::vector<double> vals(schedule.size());
    for (std::size_t i = 0; i < schedule.size(); ++i)
        vals[i] = read_curve(covariation_curve(x, y, schedule.multiple(i)), x.grid(), t);
    return make_series(schedule.eps_values(), std::move(vals));
}

EstimateSeries quadratic_variation(const SamplePath& x, const EpsSchedule& schedule, double t) {
    return covariation(x, x, schedule, t);
}

double forward_integral_eps(std::span<const double> integrand, const SamplePath& x, double eps, double t) {
    require_time(x.grid(), t);
    const auto k = eps_to_multiple(x.grid(), eps);
    return read_curve(forward_curve(integrand, x, k), x.grid(), t);
}

double forward_integral_eps(const std::function<double(double)>& integrand, const SamplePath& x, double eps,
                            double t) {
    std::vector<double> z(x.size());
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = integrand(x.grid().time(j));
    return forward_integral_eps(z, x, eps, t);
}

EstimateSeries forward_integral(std::span<const double> integrand, const SamplePath& x, const EpsSchedule& schedule,
                                double t) {
    require_time(x.grid(), t);
    std::vector<double> vals(schedule.size());
    for (std::size_t i = 0; i < schedule.size(); ++i)
        vals[i] = read_curve(forward_curve(integrand, x, schedule.multiple(i)), x.grid(), t);
    return make_series(schedule.eps_values(), std::move(vals));
}

ImproperIntegral improper_forward_integral(std::span<const double> integrand, const SamplePath& x,
                                           const EpsSchedule& schedule, std::vector<std::size_t> delta_multiples) {
    const std::size_t n = x.grid().steps();
    if (delta_multiples.size() < 2) throw std::invalid_argument("improper integral: need at least two deltas");
    for (std::size_t i = 0; i < delta_multiples.size(); ++i) {
        if (delta_multiples[i] == 0 || delta_multiples[i] >= n)
            throw std::invalid_argument("improper integral: delta out of range");
        if (i > 0 && delta_multiples[i] >= delta_multiples[i - 1])
            throw std::invalid_argument("improper integral: deltas must decrease");
    }
    const auto curve = forward_curve(integrand, x, schedule.smallest_multiple());
    std::vector<double> deltas, vals;
    for (std::size_t d : delta_multiples) {
        deltas.push_back(static_cast<double>(d) * x.grid().dt());
        vals.push_back(curve[n - d]);
    }
    ImproperIntegral out;
    out.series = make_series(std::move(deltas), std::move(vals));
    const auto& v = out.series.values;
    const double first = std::abs(v[1] - v[0]);
    const double last = std::abs(v[v.size() - 1] - v[v.size() - 2]);
    out.diverging = last > first && last > 0.1 * std::max(1.0, std::abs(v.back()));
    return out;
}

double integration_by_parts_residual(const SamplePath& x, const SamplePath& y, double eps, double t) {
    require_same_grid(x, y);
    require_time(x.grid(), t);
    const auto k = eps_to_multiple(x.grid(), eps);
    const Grid& g = x.grid();
    const double ydx = read_curve(forward_curve(y.values(), x, k), g, t);
    const double xdy = read_curve(forward_curve(x.values(), y, k), g, t);
    const double br = read_curve(covariation_curve(x, y, k), g, t);
    return y.eval_extended(t) * x.eval_extended(t) - y[0] * x[0] - ydx - xdy - br;
}

BracketCheck bvm_covariation_check(const SpaceTimeMap& f, const SpaceTimeMap& g, const SamplePath& x,
                                   const SamplePath& y, const EpsSchedule& schedule, double t) {
    require_same_grid(x, y);
    require_time(x.grid(), t);
    const Grid& grid = x.grid();
    const std::size_t n = grid.steps();
    std::vector<double> fv(n + 1), gv(n + 1), weight(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        const double tj = grid.time(j);
        fv[j] = f.value(tj, x[j]);
        gv[j] = g.value(tj, y[j]);
        weight[j] = f.dx(tj, x[j]) * g.dx(tj, y[j]);
    }
    const SamplePath fx(grid, std::move(fv)), gy(grid, std::move(gv));
    BracketCheck out;
    out.lhs = covariation(fx, gy, schedule, t);
    std::vector<double> rhs(schedule.size());
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const auto curve = covariation_curve(x, y, schedule.multiple(i));
        std::vector<double> weighted(n + 1, 0.0);
        for (std::size_t j = 0; j < n; ++j) weighted[j + 1] = weighted[j] + weight[j] * (curve[j + 1] - curve[j]);
        rhs[i] = read_curve(weighted, grid, t);
    }
    out.rhs = make_series(schedule.eps_values(), std::move(rhs));
    return out;
}

// ------------------------------------------------------ deterministic calculus

double WindowFunction::at_extended(std::ptrdiff_t i) const {
    const auto n = static_cast<std::ptrdiff_t>(steps());
    if (i < 0) return 0.0;
    if (i > n) return values.back();
    return values[static_cast<std::size_t>(i)];
}

WindowFunction to_window_function(const SamplePath& path) {
    auto v = path.values();
    return WindowFunction{path.grid().horizon(), std::vector<double>(v.begin(), v.end())};
}

TwoVarNorm two_var_norm(const WindowFunction& g, const std::vector<std::size_t>& eps_multiples) {
    if (g.values.size() < 3) throw std::invalid_argument("two_var_norm: need at least 2 cells");
    const std::size_t n = g.steps();
    const double dt = g.dt();
    TwoVarNorm out;
    for (double v : g.values) out.sup_norm = std::max(out.sup_norm, std::abs(v));
    for (std::size_t k : eps_multiples) {
        const double eps = static_cast<double>(k) * dt;
        if (k == 0 || !(eps < 1.0)) continue;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = g.at_extended(static_cast<std::ptrdiff_t>(i + k)) - g.values[i];
            acc += dt * d * d / eps;
        }
        out.eps.push_back(eps);
        out.values.push_back(acc);
        out.two_var = std::max(out.two_var, acc);
    }
    if (out.eps.empty()) throw std::invalid_argument("two_var_norm: no eps of the ladder lies in (0,1)");
    out.v2_norm = out.sup_norm + out.two_var;
    return out;
}

V2PsiCheck v2psi_check(const WindowFunction& g, const std::function<double(double)>& psi, double tol,
                       std::size_t eps_multiple) {
    const std::size_t n = g.steps();
    if (eps_multiple == 0 || eps_multiple > n) throw std::invalid_argument("v2psi_check: bad eps multiple");
    const double dt = g.dt();
    const double eps = static_cast<double>(eps_multiple) * dt;
    V2PsiCheck out;
    out.x.resize(n + 1);
    out.deviation.resize(n + 1);
    double tail = 0.0;
    double psi_max = 0.0;
    for (std::size_t ii = n + 1; ii-- > 0;) {
        const double x = -g.horizon + static_cast<double>(ii) * dt;
        if (ii < n) {
            const double d = g.at_extended(static_cast<std::ptrdiff_t>(ii + eps_multiple)) - g.values[ii];
            tail += dt * d * d / eps;
        }
        const double target = psi(ii == n ? 0.0 : -x);
        psi_max = std::max(psi_max, std::abs(target));
        out.x[ii] = ii == n ? 0.0 : x;
        out.deviation[ii] = tail - target;
        out.sup_deviation = std::max(out.sup_deviation, std::abs(out.deviation[ii]));
    }
    out.scale = std::max(1.0, psi_max);
    out.ok = out.sup_deviation <= tol * out.scale;
    return out;
}

double det_forward_integral(const std::function<double(double)>& density, const std::function<double(double)>& f,
                            double a, double b, std::size_t steps, std::size_t eps_multiple) {
    if (!(a < b)) throw std::invalid_argument("det_forward_integral: need a < b");
    if (steps < 2 || eps_multiple == 0) throw std::invalid_argument("det_forward_integral: bad discretization");
    const double h = (b - a) / static_cast<double>(steps);
    const double eps = static_cast<double>(eps_multiple) * h;
    auto f_ext = [&](std::size_t idx) { return idx >= steps ? f(b) : f(a + static_cast<double>(idx) * h); };
    double acc = 0.0;
    for (std::size_t j = 0; j < steps; ++j) {
        const double s = a + static_cast<double>(j) * h;
        acc += h * density(s) * (f_ext(j + eps_multiple) - f_ext(j)) / eps;
    }
    return acc;
}

}  // namespace regcalc
