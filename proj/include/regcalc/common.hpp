#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace regcalc {

/// Raised when a computation produces non-finite values or a factorization
/// cannot be repaired. Parameter problems use std::invalid_argument.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for stream `index` under `master`. Depends only on its inputs.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Per-stream generator of standard normals.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double operator()() { return normal_(engine_); }
    void fill(std::span<double> out) {
        for (auto& v : out) v = normal_(engine_);
    }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Worker count used by ensemble loops; 0 means hardware concurrency.
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() workers.
/// Indices are split into contiguous blocks; body must only write to
/// per-index storage so results do not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

struct SampleStats {
    double mean = 0.0;
    double stddev = 0.0;
    double stderr_ = 0.0;
    std::size_t count = 0;
};

/// Mean, sample standard deviation and standard error, summed in index order.
SampleStats sample_stats(std::span<const double> values);

double median(std::vector<double> values);

/// Median absolute deviation about the median.
double median_abs_deviation(std::span<const double> values);

/// Least-squares line y = intercept + slope * x.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace regcalc
