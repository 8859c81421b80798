#pragma once

#include "uqsim/common/linalg.hpp"
#include "uqsim/polychaos/ortho_basis.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace uqsim::polychaos {

/// Nodes and weights of a cubature rule against a probability measure.
/// points is N x d (one point per row); weights sum to 1.
struct QuadratureRule {
    Matrix points;
    Vector weights;

    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(weights.size());
    }
    [[nodiscard]] std::size_t dimension() const noexcept {
        return static_cast<std::size_t>(points.cols());
    }

    /// sum_i w_i fn(point_i) for a callable taking an Eigen row vector.
    template <class Fn>
    [[nodiscard]] double integrate(Fn&& fn) const {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < weights.size(); ++i) sum += weights[i] * fn(points.row(i));
        return sum;
    }
};

/// Gauss rule from the eigen-decomposition of the n x n Jacobi matrix:
/// diagonal gamma_0..gamma_{n-1}, off-diagonal sqrt(kappa_1..kappa_{n-1}).
/// Points come back in ascending order; weight j is the squared first
/// component of eigenvector j. Requires 1 <= n <= basis.order() + 1.
[[nodiscard]] QuadratureRule golub_welsch(const OrthoBasis& basis, int n);

inline constexpr std::size_t kDefaultTensorCap = 8;

/// Cartesian product of univariate rules (first rule varies slowest).
/// Refuses more than max_dimension factors; high-dimensional problems belong
/// to the anchored-ANOVA driver.
[[nodiscard]] QuadratureRule tensor_quadrature(std::span<const QuadratureRule> rules,
                                               std::size_t max_dimension = kDefaultTensorCap);

namespace detail {
/// Gauss-Legendre nodes and weights on [-1, 1] (weights sum to 2), cached.
[[nodiscard]] const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);
}  // namespace detail

}  // namespace uqsim::polychaos
