#pragma once

#include "uqsim/polychaos/gpc_expansion.hpp"

namespace uqsim::hier {

using polychaos::GpcExpansion;

/// Block output y = f(xi) and its standardized form zeta = (y - a) / b.
struct Surrogate {
    GpcExpansion expansion;  ///< scalar expansion of y
    double a = 0.0;          ///< mean of y
    double b = 1.0;          ///< standard deviation of y, > 0
    GpcExpansion zeta;       ///< scalar expansion of zeta: mean 0, variance 1

    [[nodiscard]] double eval_zeta(const Vector& xi) const { return zeta.eval(xi)[0]; }
};

/// a = constant coefficient, b = sqrt(sum of the other squared coefficients).
/// Throws InputError for a vector-valued or deterministic expansion.
[[nodiscard]] Surrogate normalize_surrogate(const GpcExpansion& expansion);

}  // namespace uqsim::hier
