#include "uqsim/polychaos/quadrature.hpp"

#include "uqsim/common/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>
#include <string>

namespace uqsim::polychaos {

QuadratureRule golub_welsch(const OrthoBasis& basis, int n) {
    if (n < 1 || n > basis.order() + 1) {
        throw InputError("golub_welsch: need 1 <= n <= order+1 (n=" + std::to_string(n) +
                         ", order=" + std::to_string(basis.order()) + ")");
    }
    QuadratureRule rule;
    rule.points.resize(n, 1);
    rule.weights.resize(n);
    if (n == 1) {
        rule.points(0, 0) = basis.jacobi_gamma()[0];
        rule.weights[0] = 1.0;
        return rule;
    }

    Vector diag(n);
    Vector sub(n - 1);
    for (int j = 0; j < n; ++j) diag[j] = basis.jacobi_gamma()[j];
    for (int j = 1; j < n; ++j) sub[j - 1] = std::sqrt(basis.kappa()[j]);

    Eigen::SelfAdjointEigenSolver<Matrix> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw NumericError("golub_welsch: tridiagonal eigensolver failed for n=" +
                           std::to_string(n));
    }
    const Vector& values = solver.eigenvalues();
    const Matrix& vectors = solver.eigenvectors();
    for (int j = 0; j < n; ++j) {
        rule.points(j, 0) = values[j];
        rule.weights[j] = vectors(0, j) * vectors(0, j);
    }
    return rule;
}

QuadratureRule tensor_quadrature(std::span<const QuadratureRule> rules,
                                 std::size_t max_dimension) {
    if (rules.empty()) throw InputError("tensor_quadrature needs at least one rule");
    if (rules.size() > max_dimension) {
        throw InputError("tensor grid over " + std::to_string(rules.size()) +
                         " dimensions exceeds the cap of " + std::to_string(max_dimension) +
                         "; use the anchored-ANOVA analysis for high-dimensional problems");
    }
    std::size_t total = 1;
    std::size_t dims = 0;
    for (const auto& r : rules) {
        if (r.size() == 0) throw InputError("tensor_quadrature: empty factor rule");
        total *= r.size();
        dims += r.dimension();
    }

    QuadratureRule out;
    out.points.resize(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(dims));
    out.weights.resize(static_cast<Eigen::Index>(total));
    std::vector<std::size_t> digit(rules.size(), 0);
    for (std::size_t row = 0; row < total; ++row) {
        double w = 1.0;
        Eigen::Index col = 0;
        for (std::size_t f = 0; f < rules.size(); ++f) {
            const auto& r = rules[f];
            w *= r.weights[static_cast<Eigen::Index>(digit[f])];
            for (std::size_t c = 0; c < r.dimension(); ++c) {
                out.points(static_cast<Eigen::Index>(row), col++) =
                    r.points(static_cast<Eigen::Index>(digit[f]), static_cast<Eigen::Index>(c));
            }
        }
        out.weights[static_cast<Eigen::Index>(row)] = w;
        // Last factor varies fastest.
        for (std::size_t f = rules.size(); f-- > 0;) {
            if (++digit[f] < rules[f].size()) break;
            digit[f] = 0;
        }
    }
    return out;
}

namespace detail {

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<double> nodes(n);
    std::vector<double> weights(n);
    if (n == 1) {
        nodes[0] = 0.0;
        weights[0] = 2.0;
    } else {
        Vector diag = Vector::Zero(n);
        Vector sub(n - 1);
        for (int j = 1; j < n; ++j) {
            const double jj = static_cast<double>(j) * j;
            sub[j - 1] = std::sqrt(jj / (4.0 * jj - 1.0));
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver;
        solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        for (int j = 0; j < n; ++j) {
            nodes[j] = solver.eigenvalues()[j];
            weights[j] = 2.0 * solver.eigenvectors()(0, j) * solver.eigenvectors()(0, j);
        }
    }
    return cache.emplace(n, std::make_pair(std::move(nodes), std::move(weights))).first->second;
}

}  // namespace detail

}  // namespace uqsim::polychaos
