#include "uqsim/hier/surrogate.hpp"

#include "uqsim/common/error.hpp"

#include <cmath>

namespace uqsim::hier {

Surrogate normalize_surrogate(const GpcExpansion& expansion) {
    if (expansion.outputs() != 1) {
        throw InputError("surrogate must be scalar; got " + std::to_string(expansion.outputs()) +
                         " outputs");
    }
    const Matrix& c = expansion.coefficients();
    const double a = c(0, 0);
    const double b = std::sqrt(c.col(0).tail(c.rows() - 1).squaredNorm());
    if (!(b > 0.0)) {
        throw InputError("surrogate has zero variance; a deterministic block needs no intermediate variable");
    }
    Matrix z = c / b;
    z(0, 0) = 0.0;
    return Surrogate{expansion, a, b, GpcExpansion(expansion.index_set(), expansion.bases(), z)};
}

}  // namespace uqsim::hier
