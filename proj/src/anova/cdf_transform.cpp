#include "uqsim/anova/cdf_transform.hpp"

#include "uqsim/common/error.hpp"

#include <cmath>
#include <string>

namespace uqsim::anova {

CdfTransform::CdfTransform(Distribution dist) : dist_(std::move(dist)) {
    if (dist_.is_named()) return;
    // Probe the interior on a quantile-spaced grid; an interior zero of the
    // density makes the inverse CDF flat-stepped and the anchor ambiguous.
    constexpr int probes = 512;
    for (int i = 1; i < probes; ++i) {
        const double x = dist_.quantile(static_cast<double>(i) / probes);
        if (!(dist_.density(x) > 0.0)) {
            throw InputError("distribution '" + dist_.label() +
                             "' has a zero density inside its support near x=" +
                             std::to_string(x) +
                             "; anchored decomposition requires a positive density");
        }
    }
}

AnchorPoint make_anchor(const std::vector<Distribution>& distributions,
                        const std::optional<Vector>& p_unit) {
    const auto d = static_cast<Eigen::Index>(distributions.size());
    AnchorPoint a;
    a.p_unit = p_unit ? *p_unit : Vector(Vector::Constant(d, 0.5));
    if (a.p_unit.size() != d) throw InputError("anchor must have one entry per parameter");
    a.q.resize(d);
    for (Eigen::Index k = 0; k < d; ++k) {
        const double u = a.p_unit[k];
        if (!(u > 0.0 && u < 1.0)) throw InputError("anchor coordinates must lie in (0, 1)");
        const CdfTransform t(distributions[static_cast<std::size_t>(k)]);
        a.q[k] = t.lambda(u);
        if (!(t.distribution().density(a.q[k]) > 0.0)) {
            throw InputError("anchor coordinate " + std::to_string(k) +
                             " sits where the density is zero");
        }
    }
    return a;
}

}  // namespace uqsim::anova
