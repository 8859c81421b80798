#include "uqsim/stsolver/testing_points.hpp"

#include "uqsim/common/error.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace uqsim::stsolver {

namespace {

// Extreme singular values of the lower-triangular L by power and inverse
// iteration on L^T L, warm-started from the previous vectors.
class ConditionEstimator {
public:
    double estimate(const Matrix& L, Eigen::Index r) {
        const auto tri = L.topLeftCorner(r, r).triangularView<Eigen::Lower>();
        grow(vmax_, r);
        grow(vmin_, r);
        double smax = 0.0;
        for (int it = 0; it < kIterations; ++it) {
            Vector y = tri * vmax_;
            Vector z = tri.transpose() * y;
            const double nz = z.norm();
            if (!(nz > 0.0)) return INFINITY;
            smax = std::sqrt(nz);
            vmax_ = z / nz;
        }
        double inv_smin = 0.0;
        for (int it = 0; it < kIterations; ++it) {
            Vector y = tri.transpose().solve(vmin_);
            Vector z = tri.solve(y);
            const double nz = z.norm();
            if (!std::isfinite(nz)) return INFINITY;
            inv_smin = std::sqrt(nz);
            vmin_ = z / nz;
        }
        return smax * inv_smin;
    }

private:
    static constexpr int kIterations = 12;

    static void grow(Vector& v, Eigen::Index r) {
        const Eigen::Index old = v.size();
        v.conservativeResize(r);
        for (Eigen::Index i = old; i < r; ++i) v[i] = 1.0 / std::sqrt(static_cast<double>(r));
        v.normalize();
    }

    Vector vmax_;
    Vector vmin_;
};

}  // namespace

TestingPointSet select_testing_points(std::span<const OrthoBasis> bases,
                                      const MultiIndexSet& index_set,
                                      const SelectionOptions& options) {
    const std::size_t d = bases.size();
    if (index_set.dimension() != d) {
        throw InputError("select_testing_points: basis count differs from the index-set dimension");
    }
    const int p = index_set.order();
    const auto K = static_cast<Eigen::Index>(index_set.size());

    TestingPointSet out;
    if (d == 0) {
        out.points.resize(1, 0);
        out.weights = Vector::Ones(1);
        out.V = Matrix::Ones(1, 1);
        out.condition = 1.0;
        out.candidates = 1;
        out.lu.compute(out.V);
        return out;
    }

    std::vector<polychaos::QuadratureRule> rules;
    for (const auto& b : bases) {
        if (b.order() < p) throw InputError("basis order below the requested gPC order");
        rules.push_back(polychaos::golub_welsch(b, p + 1));
    }
    const polychaos::QuadratureRule grid = polychaos::tensor_quadrature(rules, options.tensor_cap);
    const auto N = static_cast<Eigen::Index>(grid.size());
    out.candidates = static_cast<std::size_t>(N);

    const double wmax = grid.weights.maxCoeff();
    std::vector<long long> key(static_cast<std::size_t>(N));
    for (Eigen::Index i = 0; i < N; ++i) {
        key[static_cast<std::size_t>(i)] = std::llround(grid.weights[i] / wmax * 1e10);
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(N));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const auto ka = key[static_cast<std::size_t>(a)];
        const auto kb = key[static_cast<std::size_t>(b)];
        if (ka != kb) return ka > kb;
        for (Eigen::Index c = 0; c < grid.points.cols(); ++c) {
            if (grid.points(a, c) != grid.points(b, c)) return grid.points(a, c) < grid.points(b, c);
        }
        return false;
    });

    Matrix Q(K, K);  // orthonormal rows spanning the accepted rows
    Matrix L = Matrix::Zero(K, K);
    Matrix V(K, K);
    std::vector<Eigen::Index> chosen;
    ConditionEstimator cond;
    Eigen::Index r = 0;
    for (Eigen::Index cand : order) {
        if (r == K) break;
        const Vector h = polychaos::eval_multivariate_basis(index_set, bases,
                                                            grid.points.row(cand).transpose());
        const double hn = h.norm();
        Vector coeff = Vector::Zero(r + 1);
        Vector resid = h;
        for (int pass = 0; pass < 2; ++pass) {
            if (r == 0) break;
            const Vector c = Q.topRows(r) * resid;
            resid -= Q.topRows(r).transpose() * c;
            coeff.head(r) += c;
        }
        const double rn = resid.norm();
        if (!(rn > 1e-10 * hn)) continue;
        coeff[r] = rn;
        L.row(r).head(r + 1) = coeff.transpose();
        if (cond.estimate(L, r + 1) > options.condition_cap) {
            L.row(r).setZero();
            continue;
        }
        Q.row(r) = (resid / rn).transpose();
        V.row(r) = h.transpose();
        chosen.push_back(cand);
        ++r;
    }
    if (r < K) {
        throw NumericError("testing-point selection found only " + std::to_string(r) + " of " +
                           std::to_string(K) + " admissible points among " + std::to_string(N) +
                           " candidates (condition cap " + std::to_string(options.condition_cap) +
                           ")");
    }

    out.points.resize(K, static_cast<Eigen::Index>(d));
    out.weights.resize(K);
    for (Eigen::Index j = 0; j < K; ++j) {
        out.points.row(j) = grid.points.row(chosen[static_cast<std::size_t>(j)]);
        out.weights[j] = grid.weights[chosen[static_cast<std::size_t>(j)]];
    }
    out.V = std::move(V);
    Eigen::BDCSVD<Matrix> svd(out.V);
    const Vector& s = svd.singularValues();
    out.condition = s[0] / s[s.size() - 1];
    out.lu.compute(out.V);
    return out;
}

Matrix solve_coefficients(const TestingPointSet& tps, const Matrix& values) {
    if (values.rows() != tps.V.rows()) {
        throw InputError("recover_coefficients: expected " + std::to_string(tps.V.rows()) +
                         " rows of testing-point values");
    }
    Matrix c = tps.lu.solve(values);
    const Matrix residual = values - tps.V * c;
    c += tps.lu.solve(residual);
    return c;
}

GpcExpansion recover_coefficients(const Matrix& values, const TestingPointSet& tps,
                                  std::vector<OrthoBasis> bases, const MultiIndexSet& index_set) {
    return GpcExpansion(index_set, std::move(bases), solve_coefficients(tps, values));
}

SpectralSpace make_space(std::vector<OrthoBasis> bases, int order, const SelectionOptions& options) {
    for (auto& b : bases) {
        if (b.order() < order) b = polychaos::reorder_basis(b, order);
    }
    auto idx = polychaos::total_degree_index_set(bases.size(), order);
    auto tps = select_testing_points(bases, idx, options);
    return SpectralSpace{std::move(bases), std::move(idx), std::move(tps)};
}

SpectralSpace make_space(const std::vector<polychaos::Distribution>& distributions, int order,
                         const SelectionOptions& options) {
    std::vector<OrthoBasis> bases;
    for (const auto& dist : distributions) {
        bases.push_back(dist.is_named() ? polychaos::make_standard_basis(dist, order)
                                        : polychaos::stieltjes_basis(dist, order));
    }
    return make_space(std::move(bases), order, options);
}

}  // namespace uqsim::stsolver
