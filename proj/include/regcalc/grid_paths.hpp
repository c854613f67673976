#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace regcalc {

/// Uniform time grid t_k = k * horizon / steps on [0, horizon].
class Grid {
public:
    Grid(double horizon, std::size_t steps);

    double horizon() const { return horizon_; }
    std::size_t steps() const { return steps_; }
    double dt() const { return dt_; }
    /// t_k; returns the horizon exactly for k == steps.
    double time(std::size_t k) const;
    std::size_t node_count() const { return steps_ + 1; }

    bool operator==(const Grid& other) const {
        return horizon_ == other.horizon_ && steps_ == other.steps_;
    }

private:
    double horizon_;
    std::size_t steps_;
    double dt_;
};

/// Real trajectory sampled on a grid. Outside [0, T] the path is prolonged
/// by its end values; between nodes it is linearly interpolated.
class SamplePath {
public:
    SamplePath(Grid grid, std::vector<double> values, std::string label = {});

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }
    const std::string& label() const { return label_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }

    /// Node value with the index clamped into [0, n].
    double at_clamped(std::ptrdiff_t k) const {
        const auto n = static_cast<std::ptrdiff_t>(values_.size()) - 1;
        return values_[static_cast<std::size_t>(k < 0 ? 0 : (k > n ? n : k))];
    }

    double eval_extended(double t) const;

private:
    Grid grid_;
    std::vector<double> values_;
    std::string label_;
};

double eval_extended(const SamplePath& path, double t);

struct ProcessSpec;

struct BrownianMotion {
    double sigma = 1.0;
};
struct FractionalBM {
    double hurst = 0.5;
};
/// Bifractional Brownian motion B^{H,K} with covariance
/// 2^{-K} ((s^{2H} + t^{2H})^K - |t - s|^{2HK}).
struct Bifractional {
    double hurst = 0.5;
    double k = 1.0;
};
struct BoundedVariation {
    enum class Shape { Identity, RandomMonotone };
    Shape shape = Shape::Identity;
};
/// Named deterministic path t -> f(t). Ids: "const:c", "linear:a", "square", "sin".
struct Deterministic {
    std::string id;
    std::function<double(double)> f;
};
/// base + scale * perturbation with independently seeded components.
struct DirichletSum {
    std::shared_ptr<const ProcessSpec> base;
    std::shared_ptr<const ProcessSpec> perturbation;
    double scale = 1.0;
};

using ProcessKind =
    std::variant<BrownianMotion, FractionalBM, Bifractional, BoundedVariation, Deterministic, DirichletSum>;

struct ProcessSpec {
    ProcessKind kind;
    /// Overall multiplier applied after sampling the unit process.
    double multiplier = 1.0;

    static ProcessSpec brownian(double sigma = 1.0);
    static ProcessSpec fbm(double hurst);
    static ProcessSpec bifractional(double hurst, double k, double multiplier = 1.0);
    /// Bifractional scaled by 2^{(K-1)/2} * sigma so that [X]_t = sigma^2 t when HK = 1/2.
    static ProcessSpec bifractional_unit_qv(double hurst, double k, double sigma = 1.0);
    static ProcessSpec dirichlet(ProcessSpec base, ProcessSpec perturbation, double scale);
    /// W(sigma) + scale * fBm(0.75).
    static ProcessSpec dirichlet_default(double sigma, double scale);
    static ProcessSpec identity();
    static ProcessSpec random_monotone();
    static ProcessSpec deterministic(const std::string& id);

    void validate() const;
    std::string label() const;
};

/// Slope r of the pathwise quadratic variation [X]_t = r t, when finite.
std::optional<double> declared_qv_rate(const ProcessSpec& spec);
bool declares_zero_qv(const ProcessSpec& spec);

struct SamplerOptions {
    std::size_t max_cholesky_steps = 8192;
};

/// Reusable sampler: covariance factors are built once and shared read-only
/// across all draws.
class PathSampler {
public:
    PathSampler(ProcessSpec spec, Grid grid, SamplerOptions options = {});
    ~PathSampler();
    PathSampler(PathSampler&&) noexcept;
    PathSampler& operator=(PathSampler&&) noexcept;

    SamplePath sample(std::uint64_t seed) const;

    const ProcessSpec& spec() const { return spec_; }
    const Grid& grid() const { return grid_; }
    /// Jitter added to the covariance diagonal (0 when none was needed).
    double jitter() const;

private:
    struct Impl;
    ProcessSpec spec_;
    Grid grid_;
    std::unique_ptr<Impl> impl_;
};

SamplePath simulate(const ProcessSpec& spec, const Grid& grid, std::uint64_t seed,
                    SamplerOptions options = {});

/// Lazy, reproducible collection of m paths; path i uses derive_seed(master, i).
class PathEnsemble {
public:
    PathEnsemble(ProcessSpec spec, Grid grid, std::size_t count, std::uint64_t master_seed,
                 SamplerOptions options = {});

    std::size_t size() const { return count_; }
    std::uint64_t master_seed() const { return master_seed_; }
    const Grid& grid() const { return sampler_->grid(); }
    const ProcessSpec& spec() const { return sampler_->spec(); }
    std::uint64_t path_seed(std::size_t i) const;
    SamplePath path(std::size_t i) const;
    /// All paths, generated in parallel.
    std::vector<SamplePath> materialize() const;

private:
    std::shared_ptr<const PathSampler> sampler_;
    std::size_t count_;
    std::uint64_t master_seed_;
};

PathEnsemble ensemble(const ProcessSpec& spec, const Grid& grid, std::size_t m, std::uint64_t master_seed,
                      SamplerOptions options = {});

/// Header `t,x`, 17 significant digits.
void write_path_csv(std::ostream& out, const SamplePath& path);
/// Header `path_id,t,x`.
void write_ensemble_csv(std::ostream& out, const std::vector<SamplePath>& paths);

/// Shortest decimal text that round-trips at 17 significant digits.
std::string format_real(double value);

}  // namespace regcalc
