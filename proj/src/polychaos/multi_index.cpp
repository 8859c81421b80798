#include "uqsim/polychaos/multi_index.hpp"

#include "uqsim/common/error.hpp"

#include <limits>
#include <numeric>
#include <string>

namespace uqsim::polychaos {

std::uint64_t total_degree_count(std::size_t dimension, int order) {
    if (order < 0) throw InputError("polynomial order must be >= 0");
    // C(p+d, k) built up with k = min(p, d); every partial product is exact.
    const std::uint64_t n = static_cast<std::uint64_t>(order) + dimension;
    const std::uint64_t k = std::min<std::uint64_t>(static_cast<std::uint64_t>(order), dimension);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
        if (acc > std::numeric_limits<std::uint64_t>::max()) {
            throw InputError("basis count (p+d)!/(p!d!) overflows 64 bits for d=" +
                             std::to_string(dimension) + ", p=" + std::to_string(order));
        }
    }
    return static_cast<std::uint64_t>(acc);
}

namespace {

// Appends all alphas of exactly `remaining` total degree over positions
// [pos, d) in descending lexicographic order.
void enumerate_degree(std::vector<int>& alpha, std::size_t pos, int remaining,
                      std::vector<int>& flat) {
    const std::size_t d = alpha.size();
    if (pos + 1 == d) {
        alpha[pos] = remaining;
        flat.insert(flat.end(), alpha.begin(), alpha.end());
        alpha[pos] = 0;
        return;
    }
    for (int a = remaining; a >= 0; --a) {
        alpha[pos] = a;
        enumerate_degree(alpha, pos + 1, remaining - a, flat);
    }
    alpha[pos] = 0;
}

}  // namespace

MultiIndexSet MultiIndexSet::total_degree(std::size_t dimension, int order) {
    const std::uint64_t count = total_degree_count(dimension, order);
    if (dimension != 0 &&
        count > std::numeric_limits<std::size_t>::max() / (dimension * sizeof(int))) {
        throw InputError("multi-index set too large to materialize");
    }
    auto data = std::make_shared<Data>();
    data->dimension = dimension;
    data->order = order;
    data->count = static_cast<std::size_t>(count);
    if (dimension == 0) {
        data->lookup.emplace(std::vector<int>{}, 0);
        return MultiIndexSet(std::move(data));
    }
    data->flat.reserve(data->count * dimension);
    std::vector<int> alpha(dimension, 0);
    for (int deg = 0; deg <= order; ++deg) enumerate_degree(alpha, 0, deg, data->flat);
    if (data->flat.size() != data->count * dimension) {
        throw std::logic_error("multi-index enumeration count mismatch");
    }
    for (std::size_t k = 0; k < data->count; ++k) {
        const auto first = data->flat.begin() + static_cast<std::ptrdiff_t>(k * dimension);
        data->lookup.emplace(std::vector<int>(first, first + static_cast<std::ptrdiff_t>(dimension)),
                             k);
    }
    return MultiIndexSet(std::move(data));
}

int MultiIndexSet::degree(std::size_t k) const noexcept {
    const auto a = (*this)[k];
    return std::accumulate(a.begin(), a.end(), 0);
}

std::optional<std::size_t> MultiIndexSet::find(std::span<const int> alpha) const {
    if (alpha.size() != dimension()) return std::nullopt;
    auto it = data_->lookup.find(std::vector<int>(alpha.begin(), alpha.end()));
    if (it == data_->lookup.end()) return std::nullopt;
    return it->second;
}

Vector eval_multivariate_basis(const MultiIndexSet& index_set, std::span<const OrthoBasis> bases,
                               const Vector& point) {
    const std::size_t d = index_set.dimension();
    if (bases.size() != d || static_cast<std::size_t>(point.size()) != d) {
        throw InputError("eval_multivariate_basis: dimension mismatch");
    }
    const int p = index_set.order();
    Matrix table(p + 1, static_cast<Eigen::Index>(d));
    std::vector<double> buf;
    for (std::size_t j = 0; j < d; ++j) {
        if (bases[j].order() < p) {
            throw InputError("basis " + std::to_string(j) + " has order " +
                             std::to_string(bases[j].order()) + " < " + std::to_string(p));
        }
        buf.assign(bases[j].order() + 1, 0.0);
        bases[j].eval_all(point[static_cast<Eigen::Index>(j)], buf);
        for (int a = 0; a <= p; ++a) table(a, static_cast<Eigen::Index>(j)) = buf[a];
    }
    Vector out(static_cast<Eigen::Index>(index_set.size()));
    for (std::size_t k = 0; k < index_set.size(); ++k) {
        const auto alpha = index_set[k];
        double v = 1.0;
        for (std::size_t j = 0; j < d; ++j) {
            if (alpha[j] != 0) v *= table(alpha[j], static_cast<Eigen::Index>(j));
        }
        out[static_cast<Eigen::Index>(k)] = v;
    }
    return out;
}

}  // namespace uqsim::polychaos
