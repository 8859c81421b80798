#pragma once

#include "uqsim/anova/cdf_transform.hpp"
#include "uqsim/anova/sparse_expansion.hpp"
#include "uqsim/models/stochastic_dae.hpp"
#include "uqsim/stsolver/dc.hpp"
#include "uqsim/stsolver/testing_points.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace uqsim::anova {

/// Ascending variable indices.
using Subset = std::vector<std::size_t>;

/// Component g_s of the anchored decomposition.
struct AnovaTerm {
    Subset s;
    GpcExpansion expansion;  ///< scalar, over the |s| variables of s in order
    double variance = 0.0;   ///< sum of squared non-constant coefficients
    double theta = 0.0;      ///< variance / beta at the end of its level
};

/// Deterministic output of the full model at a d-dimensional point.
using ScalarFn = std::function<double(const Vector& xi)>;

/// Returns the scalar expansion of the restricted output g-hat_s over
/// `space` (bases of the variables in s). Must be safe to call concurrently.
using TermSolver = std::function<GpcExpansion(const Subset& s, const AnchorPoint& anchor,
                                              const stsolver::SpectralSpace& space)>;

/// Collocation of a black-box g: g at the testing points of `space`, with
/// the variables outside s frozen at the anchor.
[[nodiscard]] GpcExpansion anchored_subterm(const ScalarFn& g, const Subset& s,
                                            const AnchorPoint& anchor,
                                            const stsolver::SpectralSpace& space);

/// Same, building the space from the marginals of the variables in s.
[[nodiscard]] GpcExpansion anchored_subterm(const ScalarFn& g, const Subset& s,
                                            const AnchorPoint& anchor,
                                            const std::vector<Distribution>& distributions, int p);

/// Term solver running the stochastic DC solver on the model restricted to
/// s, reporting unknown `output`.
[[nodiscard]] TermSolver dae_term_solver(const models::StochasticDae& model, std::size_t output,
                                         const stsolver::DcOptions& options = {});

/// g_s = g-hat_s - sum over strict subsets t of g_t, with each g_t embedded
/// coefficient-wise into the index set of s. `lower` holds the terms of
/// every strict nonempty subset of s except those in `pruned`, which count as
/// zero. Throws std::logic_error when a required term is missing.
[[nodiscard]] AnovaTerm compose_term(const GpcExpansion& g_hat, const Subset& s, double g0,
                                     const std::map<Subset, AnovaTerm>& lower,
                                     const std::set<Subset>& pruned = {});

struct AnovaOptions {
    std::size_t m = 2;   ///< effective dimension
    double sigma = 0.0;  ///< pruning threshold on theta
    int p = 3;
    std::optional<Vector> anchor_unit;  ///< default: medians
    stsolver::SelectionOptions selection;
    unsigned threads = 1;
};

struct AnovaDecomposition {
    double g0 = 0.0;
    std::vector<AnovaTerm> terms;  ///< by level, then lexicographic subset order
    std::vector<std::vector<Subset>> active;  ///< S_1..S_m after adaptation
    double beta = 0.0;
    std::size_t m = 0;
    double sigma = 0.0;
    int p = 0;
    AnchorPoint anchor;
    SparseExpansion expansion;  ///< g0 plus all terms, over d variables
    std::uint64_t samples = 0;  ///< deterministic solves, anchor run included

    [[nodiscard]] std::vector<std::uint64_t> level_counts() const;
    [[nodiscard]] std::size_t term_count() const noexcept { return 1 + terms.size(); }
};

/// Level-by-level adaptive anchored decomposition. At level k every
/// surviving k-subset is solved; beta accumulates all their variances; then
/// each level-k subset with variance / beta < sigma removes its strict
/// supersets from the deeper levels.
[[nodiscard]] AnovaDecomposition adaptive_anova(const TermSolver& solver,
                                                const std::function<double(const AnchorPoint&)>& anchor_run,
                                                const std::vector<Distribution>& distributions,
                                                const AnovaOptions& options);

[[nodiscard]] AnovaDecomposition adaptive_anova(const ScalarFn& g,
                                                const std::vector<Distribution>& distributions,
                                                const AnovaOptions& options);

[[nodiscard]] AnovaDecomposition adaptive_anova(const models::StochasticDae& model,
                                                std::size_t output, const AnovaOptions& options,
                                                const stsolver::DcOptions& dc = {});

/// 1 + sum_k n_k (k + p)! / (k! p!). Throws InputError on overflow.
[[nodiscard]] std::uint64_t sample_count(const std::vector<std::uint64_t>& n_k, int p);

/// 1 + sum_k C(d, k) for k = 1..m. Throws InputError on overflow.
[[nodiscard]] std::uint64_t full_term_count(std::size_t d, std::size_t m);

/// C(d, k) for k = 1..m.
[[nodiscard]] std::vector<std::uint64_t> full_level_counts(std::size_t d, std::size_t m);

}  // namespace uqsim::anova
