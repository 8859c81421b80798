#pragma once

#include "uqsim/common/linalg.hpp"
#include "uqsim/polychaos/multi_index.hpp"
#include "uqsim/polychaos/ortho_basis.hpp"

#include <utility>
#include <vector>

namespace uqsim::polychaos {

/// Vector-valued truncated gPC expansion: row k of the K x n coefficient
/// table multiplies the k-th multivariate basis function.
class GpcExpansion {
public:
    GpcExpansion(MultiIndexSet index_set, std::vector<OrthoBasis> bases, Matrix coefficients);

    [[nodiscard]] const MultiIndexSet& index_set() const noexcept { return index_set_; }
    [[nodiscard]] const std::vector<OrthoBasis>& bases() const noexcept { return bases_; }
    [[nodiscard]] const Matrix& coefficients() const noexcept { return coefficients_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return index_set_.dimension(); }
    [[nodiscard]] int order() const noexcept { return index_set_.order(); }
    [[nodiscard]] std::size_t terms() const noexcept { return index_set_.size(); }
    [[nodiscard]] std::size_t outputs() const noexcept {
        return static_cast<std::size_t>(coefficients_.cols());
    }

    [[nodiscard]] Vector eval(const Vector& point) const;
    /// True when some coordinate lies outside its marginal's support.
    [[nodiscard]] bool extrapolates(const Vector& point) const;

    [[nodiscard]] Vector mean() const;
    [[nodiscard]] Vector variance() const;
    [[nodiscard]] Vector stddev() const;

    /// Scalar expansion of output i.
    [[nodiscard]] GpcExpansion component(std::size_t i) const;

private:
    MultiIndexSet index_set_;
    std::vector<OrthoBasis> bases_;
    Matrix coefficients_;
};

struct GpcValue {
    Vector value;
    bool extrapolated = false;
};

[[nodiscard]] GpcValue gpc_eval(const GpcExpansion& expansion, const Vector& point);
[[nodiscard]] std::pair<Vector, Vector> gpc_mean_variance(const GpcExpansion& expansion);

}  // namespace uqsim::polychaos
