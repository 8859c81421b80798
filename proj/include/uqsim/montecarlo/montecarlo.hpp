#pragma once

#include "uqsim/models/stochastic_dae.hpp"
#include "uqsim/stsolver/newton.hpp"
#include "uqsim/stsolver/transient.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace uqsim::montecarlo {

using polychaos::Distribution;

/// SplitMix64 (Steele, Lea, Flood). Sample i of a run draws from its own
/// generator seeded with stream_seed(seed, i), so results do not depend on
/// how samples are distributed over threads.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}
    std::uint64_t next() noexcept;
    /// Uniform in the open interval (0, 1), 53 random bits.
    double uniform() noexcept;

private:
    std::uint64_t state_;
};

[[nodiscard]] std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// n x d matrix; entry (i, k) is the inverse CDF of marginal k at the k-th
/// uniform of stream i.
[[nodiscard]] Matrix sample_parameters(const std::vector<Distribution>& distributions,
                                       std::size_t n, std::uint64_t seed);

struct Histogram {
    std::vector<double> edges;  ///< bins + 1 ascending edges
    std::vector<std::size_t> counts;
};

/// Header "bin_left,bin_right,count".
[[nodiscard]] std::string histogram_csv(const Histogram& histogram);

struct McOptions {
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::size_t bins = 50;
    /// Largest tolerated fraction of failed samples.
    double failure_budget = 1e-3;
    /// Keep the per-sample outputs in McResult::values.
    bool keep_values = false;
};

struct McResult {
    std::size_t n_samples = 0;  ///< successful samples
    std::size_t failed = 0;
    std::uint64_t seed = 0;
    Vector mean;
    Vector variance;   ///< unbiased sample variance
    Vector std_error;  ///< sqrt(variance / n_samples)
    std::vector<Histogram> histograms;  ///< one per output
    Matrix values;  ///< n_samples x outputs, when requested
};

/// Output of one deterministic run; throws NumericError when the run fails.
using SampleFn = std::function<Vector(const Vector& xi)>;

/// Evaluates fn at every sample (possibly concurrently) and aggregates in
/// sample order. Throws NumericError when more than failure_budget of the
/// samples fail.
[[nodiscard]] McResult run_mc(const SampleFn& fn, const std::vector<Distribution>& distributions,
                              const McOptions& options);

/// DC operating point per sample, started from the nominal solution.
[[nodiscard]] McResult run_mc_dc(const models::StochasticDae& model, const McOptions& options,
                                 const stsolver::NewtonOptions& newton = {}, double t = 0.0);

/// State at t_star per sample: DC at transient.t0, then the deterministic
/// integrator (same step control as the spectral solver) up to t_star.
[[nodiscard]] McResult run_mc_transient(const models::StochasticDae& model, double t_star,
                                        const stsolver::TransientOptions& transient,
                                        const McOptions& options);

}  // namespace uqsim::montecarlo
