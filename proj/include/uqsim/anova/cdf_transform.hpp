#pragma once

#include "uqsim/common/linalg.hpp"
#include "uqsim/polychaos/distribution.hpp"

#include <optional>
#include <vector>

namespace uqsim::anova {

using polychaos::Distribution;

/// Uniform-space map of one marginal: lambda is the inverse CDF, lambda_inv
/// the CDF. Anchoring in the uniform variable u = F(xi) and mapping back is
/// valid whenever the density is positive on the whole support.
class CdfTransform {
public:
    /// Throws InputError when the density vanishes somewhere inside the support.
    explicit CdfTransform(Distribution dist);

    [[nodiscard]] double lambda(double u) const { return dist_.quantile(u); }
    [[nodiscard]] double lambda_inv(double x) const { return dist_.cdf(x); }
    [[nodiscard]] const Distribution& distribution() const noexcept { return dist_; }

private:
    Distribution dist_;
};

[[nodiscard]] inline CdfTransform cdf_transform(const Distribution& dist) { return CdfTransform(dist); }

struct AnchorPoint {
    Vector q;       ///< anchor in parameter space
    Vector p_unit;  ///< anchor in [0, 1]^d, q_k = lambda_k(p_unit_k)
};

/// Defaults to p_unit = (1/2, ..., 1/2): the componentwise median.
/// Throws InputError for p_unit outside (0, 1) or a zero density at q.
[[nodiscard]] AnchorPoint make_anchor(const std::vector<Distribution>& distributions,
                                      const std::optional<Vector>& p_unit = std::nullopt);

}  // namespace uqsim::anova
