#include "regcalc/grid_paths.hpp"

#include "regcalc/common.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace regcalc {

Grid::Grid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps), dt_(0.0) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("Grid: horizon must be positive and finite");
    if (steps < 2) throw std::invalid_argument("Grid: need at least 2 steps");
    dt_ = horizon / static_cast<double>(steps);
}

double Grid::time(std::size_t k) const {
    if (k >= steps_) return horizon_;
    return static_cast<double>(k) * dt_;
}

SamplePath::SamplePath(Grid grid, std::vector<double> values, std::string label)
    : grid_(grid), values_(std::move(values)), label_(std::move(label)) {
    if (values_.size() != grid_.node_count())
        throw std::invalid_argument("SamplePath: value count does not match grid");
    for (double v : values_)
        if (!std::isfinite(v)) throw NumericalError("SamplePath: non-finite value");
}

double SamplePath::eval_extended(double t) const {
    const std::size_t n = grid_.steps();
    if (t <= 0.0) return values_.front();
    if (t >= grid_.horizon()) return values_[n];
    const double s = t / grid_.dt();
    auto k = static_cast<std::size_t>(std::floor(s));
    if (k >= n) return values_[n];
    const double w = s - static_cast<double>(k);
    return (1.0 - w) * values_[k] + w * values_[k + 1];
}

double eval_extended(const SamplePath& path, double t) { return path.eval_extended(t); }

// ---------------------------------------------------------------- specs

ProcessSpec ProcessSpec::brownian(double sigma) { return {BrownianMotion{sigma}, 1.0}; }
ProcessSpec ProcessSpec::fbm(double hurst) { return {FractionalBM{hurst}, 1.0}; }
ProcessSpec ProcessSpec::bifractional(double hurst, double k, double multiplier) {
    return {Bifractional{hurst, k}, multiplier};
}
ProcessSpec ProcessSpec::bifractional_unit_qv(double hurst, double k, double sigma) {
    return {Bifractional{hurst, k}, sigma * std::pow(2.0, 0.5 * (k - 1.0))};
}
ProcessSpec ProcessSpec::dirichlet(ProcessSpec base, ProcessSpec perturbation, double scale) {
    DirichletSum d;
    d.base = std::make_shared<const ProcessSpec>(std::move(base));
    d.perturbation = std::make_shared<const ProcessSpec>(std::move(perturbation));
    d.scale = scale;
    return {std::move(d), 1.0};
}
ProcessSpec ProcessSpec::dirichlet_default(double sigma, double scale) {
    return dirichlet(brownian(sigma), fbm(0.75), scale);
}
ProcessSpec ProcessSpec::identity() { return {BoundedVariation{BoundedVariation::Shape::Identity}, 1.0}; }
ProcessSpec ProcessSpec::random_monotone() {
    return {BoundedVariation{BoundedVariation::Shape::RandomMonotone}, 1.0};
}

ProcessSpec ProcessSpec::deterministic(const std::string& id) {
    Deterministic d;
    d.id = id;
    if (id.rfind("const:", 0) == 0) {
        const double c = std::stod(id.substr(6));
        d.f = [c](double) { return c; };
    } else if (id.rfind("linear:", 0) == 0) {
        const double a = std::stod(id.substr(7));
        d.f = [a](double t) { return a * t; };
    } else if (id == "square") {
        d.f = [](double t) { return t * t; };
    } else if (id == "sin") {
        d.f = [](double t) { return std::sin(2.0 * M_PI * t); };
    } else {
        throw std::invalid_argument("unknown deterministic function id: " + id);
    }
    return {std::move(d), 1.0};
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void ProcessSpec::validate() const {
    if (!std::isfinite(multiplier)) throw std::invalid_argument("process multiplier must be finite");
    std::visit(overloaded{
                   [](const BrownianMotion& b) {
                       if (!(b.sigma >= 0.0) || !std::isfinite(b.sigma))
                           throw std::invalid_argument("BrownianMotion: sigma must be >= 0");
                   },
                   [](const FractionalBM& f) {
                       if (!(f.hurst > 0.0 && f.hurst < 1.0))
                           throw std::invalid_argument("FractionalBM: H must lie in (0,1)");
                   },
                   [](const Bifractional& b) {
                       if (!(b.hurst > 0.0 && b.hurst < 1.0))
                           throw std::invalid_argument("Bifractional: H must lie in (0,1)");
                       if (!(b.k > 0.0 && b.k <= 1.0))
                           throw std::invalid_argument("Bifractional: K must lie in (0,1]");
                   },
                   [](const BoundedVariation&) {},
                   [](const Deterministic& d) {
                       if (!d.f) throw std::invalid_argument("Deterministic: missing function");
                   },
                   [](const DirichletSum& d) {
                       if (!d.base || !d.perturbation)
                           throw std::invalid_argument("DirichletSum: missing component");
                       d.base->validate();
                       d.perturbation->validate();
                       if (!declares_zero_qv(*d.perturbation))
                           throw std::invalid_argument("DirichletSum: perturbation must have zero quadratic variation");
                       if (!std::isfinite(d.scale)) throw std::invalid_argument("DirichletSum: scale must be finite");
                   },
               },
               kind);
}

std::string ProcessSpec::label() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const BrownianMotion& b) { os << "bm(sigma=" << b.sigma << ")"; },
                   [&](const FractionalBM& f) { os << "fbm(H=" << f.hurst << ")"; },
                   [&](const Bifractional& b) { os << "bifbm(H=" << b.hurst << ",K=" << b.k << ")"; },
                   [&](const BoundedVariation& b) {
                       os << (b.shape == BoundedVariation::Shape::Identity ? "bv(identity)" : "bv(random_monotone)");
                   },
                   [&](const Deterministic& d) { os << "det(" << d.id << ")"; },
                   [&](const DirichletSum& d) {
                       os << "dirichlet(" << d.base->label() << "+" << d.scale << "*" << d.perturbation->label() << ")";
                   },
               },
               kind);
    if (multiplier != 1.0) return std::to_string(multiplier) + "*" + os.str();
    return os.str();
}

std::optional<double> declared_qv_rate(const ProcessSpec& spec) {
    const double m2 = spec.multiplier * spec.multiplier;
    return std::visit(overloaded{
                          [&](const BrownianMotion& b) -> std::optional<double> { return m2 * b.sigma * b.sigma; },
                          [&](const FractionalBM& f) -> std::optional<double> {
                              if (f.hurst > 0.5) return 0.0;
                              if (f.hurst == 0.5) return m2;
                              return std::nullopt;
                          },
                          [&](const Bifractional& b) -> std::optional<double> {
                              const double hk = b.hurst * b.k;
                              if (hk > 0.5) return 0.0;
                              if (hk == 0.5) return m2 * std::pow(2.0, 1.0 - b.k);
                              return std::nullopt;
                          },
                          [](const BoundedVariation&) -> std::optional<double> { return 0.0; },
                          [](const Deterministic&) -> std::optional<double> { return 0.0; },
                          [&](const DirichletSum& d) -> std::optional<double> {
                              auto base = declared_qv_rate(*d.base);
                              if (!base) return std::nullopt;
                              return m2 * *base;
                          },
                      },
                      spec.kind);
}

bool declares_zero_qv(const ProcessSpec& spec) {
    auto r = declared_qv_rate(spec);
    return r && *r == 0.0;
}

// ---------------------------------------------------------------- sampling

namespace {

double fbm_cov(double s, double t, double h) {
    const double h2 = 2.0 * h;
    return 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
}

double bifbm_cov(double s, double t, double h, double k) {
    const double h2 = 2.0 * h;
    return std::pow(2.0, -k) * (std::pow(std::pow(s, h2) + std::pow(t, h2), k) - std::pow(std::abs(t - s), h2 * k));
}

struct CholeskyFactor {
    Eigen::MatrixXd lower;
    double jitter = 0.0;
};

CholeskyFactor factor_covariance(const Grid& grid, const std::function<double(double, double)>& cov,
                                 std::size_t max_steps) {
    const std::size_t n = grid.steps();
    if (n > max_steps)
        throw std::invalid_argument("covariance sampler: grid has " + std::to_string(n) +
                                    " steps, above the Cholesky limit " + std::to_string(max_steps));
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd c(ni, ni);
    for (Eigen::Index i = 0; i < ni; ++i) {
        const double ti = grid.time(static_cast<std::size_t>(i) + 1);
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = cov(ti, grid.time(static_cast<std::size_t>(j) + 1));
            c(i, j) = v;
            c(j, i) = v;
        }
    }
    if (!c.allFinite()) throw NumericalError("covariance sampler: non-finite covariance entries");
    const double scale = c.diagonal().cwiseAbs().maxCoeff();
    static constexpr double kJitter[] = {0.0, 1e-14, 1e-13, 1e-12, 1e-11, 1e-10};
    for (double rel : kJitter) {
        Eigen::MatrixXd trial = c;
        trial.diagonal().array() += rel * scale;
        Eigen::LLT<Eigen::MatrixXd> llt(trial);
        if (llt.info() == Eigen::Success) {
            CholeskyFactor f;
            f.lower = llt.matrixL();
            f.jitter = rel * scale;
            return f;
        }
    }
    throw NumericalError("covariance sampler: covariance is not positive definite after jitter repair");
}

}  // namespace

struct PathSampler::Impl {
    std::shared_ptr<const CholeskyFactor> factor;
    std::unique_ptr<PathSampler> base;
    std::unique_ptr<PathSampler> perturbation;
};

PathSampler::PathSampler(ProcessSpec spec, Grid grid, SamplerOptions options)
    : spec_(std::move(spec)), grid_(grid), impl_(std::make_unique<Impl>()) {
    spec_.validate();
    std::visit(overloaded{
                   [&](const FractionalBM& f) {
                       const double h = f.hurst;
                       impl_->factor = std::make_shared<const CholeskyFactor>(factor_covariance(
                           grid_, [h](double s, double t) { return fbm_cov(s, t, h); }, options.max_cholesky_steps));
                   },
                   [&](const Bifractional& b) {
                       const double h = b.hurst, k = b.k;
                       impl_->factor = std::make_shared<const CholeskyFactor>(factor_covariance(
                           grid_, [h, k](double s, double t) { return bifbm_cov(s, t, h, k); },
                           options.max_cholesky_steps));
                   },
                   [&](const DirichletSum& d) {
                       impl_->base = std::make_unique<PathSampler>(*d.base, grid_, options);
                       impl_->perturbation = std::make_unique<PathSampler>(*d.perturbation, grid_, options);
                   },
                   [](const auto&) {},
               },
               spec_.kind);
}

PathSampler::~PathSampler() = default;
PathSampler::PathSampler(PathSampler&&) noexcept = default;
PathSampler& PathSampler::operator=(PathSampler&&) noexcept = default;

double PathSampler::jitter() const { return impl_->factor ? impl_->factor->jitter : 0.0; }

SamplePath PathSampler::sample(std::uint64_t seed) const {
    const std::size_t n = grid_.steps();
    std::vector<double> x(n + 1, 0.0);
    NormalStream rng(seed);

    std::visit(overloaded{
                   [&](const BrownianMotion& b) {
                       const double sd = std::sqrt(grid_.dt());
                       double acc = 0.0;
                       for (std::size_t k = 1; k <= n; ++k) {
                           acc += sd * rng();
                           x[k] = acc;
                       }
                       // Scale after accumulating so sigma * path is exact.
                       if (b.sigma != 1.0)
                           for (auto& v : x) v *= b.sigma;
                   },
                   [&](const FractionalBM&) {
                       Eigen::VectorXd z(static_cast<Eigen::Index>(n));
                       rng.fill({z.data(), n});
                       const Eigen::VectorXd y = impl_->factor->lower.triangularView<Eigen::Lower>() * z;
                       for (std::size_t k = 1; k <= n; ++k) x[k] = y(static_cast<Eigen::Index>(k - 1));
                   },
                   [&](const Bifractional&) {
                       Eigen::VectorXd z(static_cast<Eigen::Index>(n));
                       rng.fill({z.data(), n});
                       const Eigen::VectorXd y = impl_->factor->lower.triangularView<Eigen::Lower>() * z;
                       for (std::size_t k = 1; k <= n; ++k) x[k] = y(static_cast<Eigen::Index>(k - 1));
                   },
                   [&](const BoundedVariation& b) {
                       if (b.shape == BoundedVariation::Shape::Identity) {
                           for (std::size_t k = 0; k <= n; ++k) x[k] = grid_.time(k);
                       } else {
                           std::exponential_distribution<double> e(1.0);
                           double acc = 0.0;
                           for (std::size_t k = 1; k <= n; ++k) {
                               acc += grid_.dt() * e(rng.engine());
                               x[k] = acc;
                           }
                       }
                   },
                   [&](const Deterministic& d) {
                       for (std::size_t k = 0; k <= n; ++k) x[k] = d.f(grid_.time(k));
                   },
                   [&](const DirichletSum& d) {
                       const SamplePath b = impl_->base->sample(derive_seed(seed, 1));
                       const SamplePath p = impl_->perturbation->sample(derive_seed(seed, 2));
                       for (std::size_t k = 0; k <= n; ++k) x[k] = b[k] + d.scale * p[k];
                   },
               },
               spec_.kind);

    if (spec_.multiplier != 1.0)
        for (auto& v : x) v *= spec_.multiplier;
    return SamplePath(grid_, std::move(x), spec_.label());
}

SamplePath simulate(const ProcessSpec& spec, const Grid& grid, std::uint64_t seed, SamplerOptions options) {
    return PathSampler(spec, grid, options).sample(seed);
}

PathEnsemble::PathEnsemble(ProcessSpec spec, Grid grid, std::size_t count, std::uint64_t master_seed,
                           SamplerOptions options)
    : sampler_(std::make_shared<const PathSampler>(std::move(spec), grid, options)),
      count_(count),
      master_seed_(master_seed) {
    if (count == 0) throw std::invalid_argument("ensemble: need at least one path");
}

std::uint64_t PathEnsemble::path_seed(std::size_t i) const { return derive_seed(master_seed_, i); }

SamplePath PathEnsemble::path(std::size_t i) const {
    if (i >= count_) throw std::out_of_range("ensemble: path index out of range");
    return sampler_->sample(path_seed(i));
}

std::vector<SamplePath> PathEnsemble::materialize() const {
    std::vector<std::optional<SamplePath>> slots(count_);
    parallel_for(count_, [&](std::size_t i) { slots[i].emplace(path(i)); });
    std::vector<SamplePath> out;
    out.reserve(count_);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

PathEnsemble ensemble(const ProcessSpec& spec, const Grid& grid, std::size_t m, std::uint64_t master_seed,
                      SamplerOptions options) {
    return PathEnsemble(spec, grid, m, master_seed, options);
}

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_path_csv(std::ostream& out, const SamplePath& path) {
    out << "t,x\n";
    for (std::size_t k = 0; k < path.size(); ++k)
        out << format_real(path.grid().time(k)) << ',' << format_real(path[k]) << '\n';
}

void write_ensemble_csv(std::ostream& out, const std::vector<SamplePath>& paths) {
    out << "path_id,t,x\n";
    for (std::size_t i = 0; i < paths.size(); ++i)
        for (std::size_t k = 0; k < paths[i].size(); ++k)
            out << i << ',' << format_real(paths[i].grid().time(k)) << ',' << format_real(paths[i][k]) << '\n';
}

}  // namespace regcalc
