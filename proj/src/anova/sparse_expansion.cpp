#include "uqsim/anova/sparse_expansion.hpp"

#include "uqsim/common/error.hpp"

#include <algorithm>
#include <numeric>

namespace uqsim::anova {

SparseExpansion::SparseExpansion(std::vector<OrthoBasis> bases) : bases_(std::move(bases)) {}

void SparseExpansion::add(const SparseIndex& index, double value) {
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (index[i].first >= bases_.size() || index[i].second <= 0 ||
            index[i].second > bases_[index[i].first].order() ||
            (i > 0 && index[i - 1].first >= index[i].first)) {
            throw InputError("invalid sparse multi-index");
        }
    }
    coeffs_[index] += value;
}

void SparseExpansion::add_embedded(const GpcExpansion& expansion, std::span<const std::size_t> vars,
                                   double factor) {
    if (expansion.outputs() != 1 || expansion.dimension() != vars.size()) {
        throw InputError("embedded expansion must be scalar over the listed variables");
    }
    // Sort positions by target variable so the sparse index comes out ascending.
    std::vector<std::size_t> order(vars.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vars[a] < vars[b]; });
    const auto& idx = expansion.index_set();
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto alpha = idx[k];
        SparseIndex s;
        for (std::size_t j : order) {
            if (alpha[j] > 0) s.emplace_back(static_cast<std::uint32_t>(vars[j]), alpha[j]);
        }
        add(s, factor * expansion.coefficients()(static_cast<Eigen::Index>(k), 0));
    }
}

double SparseExpansion::coefficient(const SparseIndex& index) const {
    auto it = coeffs_.find(index);
    return it == coeffs_.end() ? 0.0 : it->second;
}

double SparseExpansion::eval(const Vector& point) const {
    if (static_cast<std::size_t>(point.size()) != bases_.size()) {
        throw InputError("sparse expansion evaluated at a point of the wrong dimension");
    }
    // Univariate values are computed lazily per variable.
    std::vector<std::vector<double>> cache(bases_.size());
    double sum = 0.0;
    for (const auto& [index, c] : coeffs_) {
        double term = c;
        for (const auto& [var, deg] : index) {
            auto& vals = cache[var];
            if (vals.empty()) {
                vals.resize(static_cast<std::size_t>(bases_[var].order()) + 1);
                bases_[var].eval_all(point[var], vals);
            }
            term *= vals[static_cast<std::size_t>(deg)];
        }
        sum += term;
    }
    return sum;
}

double SparseExpansion::mean() const { return coefficient({}); }

double SparseExpansion::variance() const {
    double v = 0.0;
    for (const auto& [index, c] : coeffs_) {
        if (!index.empty()) v += c * c;
    }
    return v;
}

SparseExpansion to_sparse(const GpcExpansion& expansion) {
    SparseExpansion out(expansion.bases());
    std::vector<std::size_t> vars(expansion.dimension());
    std::iota(vars.begin(), vars.end(), 0);
    out.add_embedded(expansion, vars);
    return out;
}

Sensitivities sensitivities(const SparseExpansion& expansion) {
    const double var = expansion.variance();
    if (!(var > 0.0)) throw InputError("sensitivities need a positive variance");
    const auto d = static_cast<Eigen::Index>(expansion.dimension());
    Sensitivities out{Vector::Zero(d), Vector::Zero(d)};
    for (const auto& [index, c] : expansion.coefficients()) {
        if (index.empty()) continue;
        const double c2 = c * c;
        if (index.size() == 1) out.S[index[0].first] += c2;
        for (const auto& entry : index) out.T[entry.first] += c2;
    }
    out.S /= var;
    out.T /= var;
    return out;
}

Sensitivities sensitivities(const GpcExpansion& expansion) {
    if (expansion.outputs() != 1) throw InputError("sensitivities need a scalar expansion");
    return sensitivities(to_sparse(expansion));
}

}  // namespace uqsim::anova
