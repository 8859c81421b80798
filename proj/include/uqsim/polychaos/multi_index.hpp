#pragma once

#include "uqsim/common/linalg.hpp"
#include "uqsim/polychaos/ortho_basis.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace uqsim::polychaos {

/// (p+d)! / (p! d!) with overflow detection (throws InputError).
[[nodiscard]] std::uint64_t total_degree_count(std::size_t dimension, int order);

/// All multi-indices alpha in N^d with |alpha|_1 <= p, in graded lexicographic
/// order: ascending total degree, and within one degree descending
/// lexicographic, so degree 1 reads e_1, e_2, ..., e_d.
///
/// Copies share the (immutable) index table.
class MultiIndexSet {
public:
    [[nodiscard]] static MultiIndexSet total_degree(std::size_t dimension, int order);

    [[nodiscard]] std::size_t dimension() const noexcept { return data_->dimension; }
    [[nodiscard]] int order() const noexcept { return data_->order; }
    [[nodiscard]] std::size_t size() const noexcept { return data_->count; }

    [[nodiscard]] std::span<const int> operator[](std::size_t k) const noexcept {
        return {data_->flat.data() + k * data_->dimension, data_->dimension};
    }
    [[nodiscard]] int degree(std::size_t k) const noexcept;
    [[nodiscard]] std::optional<std::size_t> find(std::span<const int> alpha) const;

    [[nodiscard]] bool operator==(const MultiIndexSet& other) const noexcept {
        return data_ == other.data_ ||
               (dimension() == other.dimension() && order() == other.order());
    }

private:
    struct Data {
        std::size_t dimension = 0;
        int order = 0;
        std::size_t count = 0;
        std::vector<int> flat;
        std::map<std::vector<int>, std::size_t> lookup;
    };
    explicit MultiIndexSet(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
    std::shared_ptr<const Data> data_;
};

[[nodiscard]] inline MultiIndexSet total_degree_index_set(std::size_t dimension, int order) {
    return MultiIndexSet::total_degree(dimension, order);
}

/// Entry k is prod_j phi^j_{alpha_j}(point_j) for the k-th multi-index.
[[nodiscard]] Vector eval_multivariate_basis(const MultiIndexSet& index_set,
                                             std::span<const OrthoBasis> bases,
                                             const Vector& point);

}  // namespace uqsim::polychaos
