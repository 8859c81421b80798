#pragma once

#include "uqsim/polychaos/gpc_expansion.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace uqsim::anova {

using polychaos::GpcExpansion;
using polychaos::OrthoBasis;

/// Multi-index as ascending (variable, degree) pairs; degree-0 entries omitted.
using SparseIndex = std::vector<std::pair<std::uint32_t, int>>;

/// Scalar gPC expansion over d variables storing only the listed terms.
class SparseExpansion {
public:
    /// bases[k] is the orthonormal basis of variable k.
    explicit SparseExpansion(std::vector<OrthoBasis> bases);

    [[nodiscard]] std::size_t dimension() const noexcept { return bases_.size(); }
    [[nodiscard]] const std::vector<OrthoBasis>& bases() const noexcept { return bases_; }
    [[nodiscard]] const std::map<SparseIndex, double>& coefficients() const noexcept { return coeffs_; }
    [[nodiscard]] std::size_t terms() const noexcept { return coeffs_.size(); }

    void add(const SparseIndex& index, double value);
    /// Adds a dense scalar expansion whose variable j is variable vars[j] here.
    void add_embedded(const GpcExpansion& expansion, std::span<const std::size_t> vars,
                      double factor = 1.0);

    [[nodiscard]] double coefficient(const SparseIndex& index) const;
    [[nodiscard]] double eval(const Vector& point) const;
    [[nodiscard]] double mean() const;
    [[nodiscard]] double variance() const;

private:
    std::vector<OrthoBasis> bases_;
    std::map<SparseIndex, double> coeffs_;
};

/// Sparse form of a dense scalar expansion over all of its variables.
[[nodiscard]] SparseExpansion to_sparse(const GpcExpansion& expansion);

struct Sensitivities {
    Vector S;  ///< main effects
    Vector T;  ///< total effects
};

/// S_k: squared coefficients of terms in variable k alone; T_k: of all terms
/// involving k; both over the total variance. Throws InputError when the
/// variance is zero.
[[nodiscard]] Sensitivities sensitivities(const SparseExpansion& expansion);
[[nodiscard]] Sensitivities sensitivities(const GpcExpansion& expansion);

}  // namespace uqsim::anova
