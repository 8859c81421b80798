#pragma once

#include "uqsim/hier/surrogate.hpp"
#include "uqsim/polychaos/quadrature.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace uqsim::hier {

using polychaos::OrthoBasis;
using polychaos::QuadratureRule;

/// Probability measure of an intermediate variable.
///
/// Quadrature-backed: the pushforward of a Gauss rule in the block's
/// parameter space through zeta(xi). Integrals of polynomials in zeta up to
/// exact_degree() are exact; no pointwise density exists.
///
/// Fitted: a piecewise-polynomial density on a knot grid (linear between
/// knots plus a t(1 - t) term per segment), i.e. a monotone piecewise
/// cubic CDF.
class IntermediateDensity {
public:
    enum class Route { Quadrature, Fitted };

    /// Discrete measure with its polynomial exactness degree.
    [[nodiscard]] static IntermediateDensity from_rule(QuadratureRule rule, int exact_degree);
    /// knots ascending, values >= 0 at the knots, and per segment the
    /// coefficient c of the c t(1 - t) term added to the linear interpolant.
    /// Normalized on construction.
    [[nodiscard]] static IntermediateDensity fitted(std::vector<double> knots,
                                                    std::vector<double> values,
                                                    std::vector<double> bumps);

    [[nodiscard]] Route route() const noexcept { return route_; }
    [[nodiscard]] double lower() const noexcept { return lo_; }
    [[nodiscard]] double upper() const noexcept { return hi_; }
    /// Largest polynomial degree integrated exactly (unbounded for fitted).
    [[nodiscard]] int exact_degree() const noexcept { return exact_degree_; }

    /// Pointwise density; InputError for the quadrature route.
    [[nodiscard]] double density(double z) const;
    [[nodiscard]] double cdf(double z) const;

    /// Discrete measure integrating polynomials of degree <= `degree` exactly
    /// against this density. Refuses (InputError) beyond exact_degree().
    [[nodiscard]] QuadratureRule moment_rule(int degree) const;

    [[nodiscard]] double mean() const;
    [[nodiscard]] double variance() const;

private:
    IntermediateDensity() = default;
    [[nodiscard]] double segment_density(std::size_t k, double t) const;

    Route route_ = Route::Quadrature;
    double lo_ = 0.0;
    double hi_ = 0.0;
    int exact_degree_ = 0;
    QuadratureRule rule_;
    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> bumps_;
    double scale_ = 1.0;  // 1 / unnormalized mass
};

/// Gauss rule with `points_per_dim` nodes per block parameter. Polynomials of
/// degree k in zeta are resolved up to k = floor((2 n - 1) / deg(zeta)).
/// Requires bases that can be raised to order n - 1 (named marginals, or
/// bases already of that order).
[[nodiscard]] IntermediateDensity density_by_quadrature(const Surrogate& surrogate,
                                                        int points_per_dim);

/// Smallest points_per_dim for which density_by_quadrature resolves what
/// build_intermediate_basis needs at order p.
[[nodiscard]] int quadrature_points_for(const Surrogate& surrogate, int p);

struct SamplingOptions {
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    /// Segments between equiprobable knots.
    std::size_t segments = 100;
    /// Half-width, in knots, of the window used for the density at a knot.
    std::size_t window = 4;
};

/// Samples zeta through the surrogate and fits the density on [min, max] of
/// the samples: equiprobable quantile knots, with both end segments split
/// geometrically down to about 16 samples per piece. Throws InputError for
/// fewer than 1e4 samples or degenerate (repeated) samples.
[[nodiscard]] IntermediateDensity density_by_sampling(const Surrogate& surrogate,
                                                      const SamplingOptions& options = {});

/// Same fit applied to given samples of zeta.
[[nodiscard]] IntermediateDensity fit_density(std::vector<double> samples,
                                              const SamplingOptions& options = {});

/// Orthonormal basis of order p for the density (discrete Stieltjes against a
/// rule exact to degree 2p + 1) and its (p + 1)-point Gauss rule.
[[nodiscard]] std::pair<OrthoBasis, QuadratureRule> build_intermediate_basis(
    const IntermediateDensity& density, int p);

}  // namespace uqsim::hier
