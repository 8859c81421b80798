#pragma once

#include "uqsim/common/linalg.hpp"
#include "uqsim/polychaos/gpc_expansion.hpp"
#include "uqsim/polychaos/quadrature.hpp"

#include <Eigen/LU>

#include <span>
#include <vector>

namespace uqsim::stsolver {

using polychaos::GpcExpansion;
using polychaos::MultiIndexSet;
using polychaos::OrthoBasis;

struct SelectionOptions {
    double condition_cap = 1e8;
    std::size_t tensor_cap = polychaos::kDefaultTensorCap;
};

/// K testing points drawn from the (p+1)^d tensor Gauss grid.
/// Row j of V holds H_k(point_j) for every multi-index k.
struct TestingPointSet {
    Matrix points;   ///< K x d
    Vector weights;  ///< tensor-grid weights of the chosen points
    Matrix V;        ///< K x K
    double condition = 0.0;  ///< 2-norm condition number of V
    std::size_t candidates = 0;
    Eigen::PartialPivLU<Matrix> lu;

    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(points.rows());
    }
    [[nodiscard]] Vector point(std::size_t j) const {
        return points.row(static_cast<Eigen::Index>(j)).transpose();
    }
};

/// Candidates are visited by descending weight (weights equal to a relative
/// 1e-10 count as ties, broken by ascending lexicographic point order). A
/// candidate is kept when it raises the rank of the rows chosen so far and
/// the estimated condition number stays within the cap. Throws NumericError
/// when fewer than K candidates qualify.
[[nodiscard]] TestingPointSet select_testing_points(std::span<const OrthoBasis> bases,
                                                    const MultiIndexSet& index_set,
                                                    const SelectionOptions& options = {});

/// Solves V C = values (K x n) with one step of iterative refinement.
[[nodiscard]] Matrix solve_coefficients(const TestingPointSet& tps, const Matrix& values);

[[nodiscard]] GpcExpansion recover_coefficients(const Matrix& values, const TestingPointSet& tps,
                                                std::vector<OrthoBasis> bases,
                                                const MultiIndexSet& index_set);

/// Bases, index set and testing points for one stochastic problem.
struct SpectralSpace {
    std::vector<OrthoBasis> bases;
    MultiIndexSet index_set;
    TestingPointSet tps;

    [[nodiscard]] std::size_t dimension() const noexcept { return bases.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return index_set.size(); }
    [[nodiscard]] GpcExpansion expansion(const Matrix& values) const {
        return recover_coefficients(values, tps, bases, index_set);
    }
};

/// Closed-form bases for named marginals, Stieltjes bases for custom ones.
[[nodiscard]] SpectralSpace make_space(const std::vector<polychaos::Distribution>& distributions,
                                       int order, const SelectionOptions& options = {});
[[nodiscard]] SpectralSpace make_space(std::vector<OrthoBasis> bases, int order,
                                       const SelectionOptions& options = {});

}  // namespace uqsim::stsolver
