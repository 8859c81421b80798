#include "uqsim/anova/anova.hpp"

#include "uqsim/common/error.hpp"
#include "uqsim/common/parallel.hpp"
#include "uqsim/polychaos/multi_index.hpp"
#include "uqsim/stsolver/newton.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace uqsim::anova {

namespace {

std::string subset_text(const Subset& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
    return out + "}";
}

using u128 = unsigned __int128;
constexpr u128 kMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    u128 r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > kMax) throw InputError("binomial coefficient overflows 64 bits");
    }
    return static_cast<std::uint64_t>(r);
}

// All k-subsets of {0..d-1} in lexicographic order.
std::vector<Subset> combinations(std::size_t d, std::size_t k) {
    std::vector<Subset> out;
    if (k > d) return out;
    Subset s(k);
    for (std::size_t i = 0; i < k; ++i) s[i] = i;
    while (true) {
        out.push_back(s);
        std::size_t i = k;
        while (i > 0 && s[i - 1] == d - k + i - 1) --i;
        if (i == 0) break;
        ++s[i - 1];
        for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
    }
    return out;
}

// True when some strict nonempty subset of s is in `pruned`.
bool has_pruned_subset(const Subset& s, const std::set<Subset>& pruned) {
    if (pruned.empty()) return false;
    const std::size_t k = s.size();
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << k); ++mask) {
        Subset t;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask & (std::uint64_t{1} << i)) t.push_back(s[i]);
        }
        if (pruned.count(t)) return true;
    }
    return false;
}

}  // namespace

GpcExpansion anchored_subterm(const ScalarFn& g, const Subset& s, const AnchorPoint& anchor,
                              const stsolver::SpectralSpace& space) {
    if (space.dimension() != s.size()) throw InputError("subterm space must match |s|");
    const auto K = static_cast<Eigen::Index>(space.tps.size());
    Matrix values(K, 1);
    for (Eigen::Index j = 0; j < K; ++j) {
        Vector x = anchor.q;
        for (std::size_t i = 0; i < s.size(); ++i) {
            x[static_cast<Eigen::Index>(s[i])] = space.tps.points(j, static_cast<Eigen::Index>(i));
        }
        values(j, 0) = g(x);
    }
    return space.expansion(values);
}

GpcExpansion anchored_subterm(const ScalarFn& g, const Subset& s, const AnchorPoint& anchor,
                              const std::vector<Distribution>& distributions, int p) {
    std::vector<Distribution> sub;
    for (std::size_t k : s) {
        if (k >= distributions.size()) throw InputError("subset index out of range");
        sub.push_back(distributions[k]);
    }
    return anchored_subterm(g, s, anchor, stsolver::make_space(sub, p));
}

TermSolver dae_term_solver(const models::StochasticDae& model, std::size_t output,
                           const stsolver::DcOptions& options) {
    if (output >= model.n) throw InputError("ANOVA output index out of range");
    return [&model, output, options](const Subset& s, const AnchorPoint& anchor,
                                     const stsolver::SpectralSpace& space) {
        const models::StochasticDae restricted = models::restrict_parameters(model, s, anchor.q);
        stsolver::DcOptions opt = options;
        opt.threads = 1;
        return stsolver::solve_dc(restricted, space, opt).expansion.component(output);
    };
}

AnovaTerm compose_term(const GpcExpansion& g_hat, const Subset& s, double g0,
                       const std::map<Subset, AnovaTerm>& lower, const std::set<Subset>& pruned) {
    if (g_hat.outputs() != 1 || g_hat.dimension() != s.size()) {
        throw InputError("g-hat for " + subset_text(s) + " must be scalar over |s| variables");
    }
    const auto& idx = g_hat.index_set();
    Matrix c = g_hat.coefficients();
    c(0, 0) -= g0;
    const std::size_t k = s.size();
    if (k > 63) throw InputError("subset too large");
    std::vector<int> alpha(k);
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << k); ++mask) {
        Subset t;
        std::vector<std::size_t> pos;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask & (std::uint64_t{1} << i)) {
                t.push_back(s[i]);
                pos.push_back(i);
            }
        }
        if (pruned.count(t)) continue;
        auto it = lower.find(t);
        if (it == lower.end()) {
            throw std::logic_error("anchored term " + subset_text(t) + " missing while composing " +
                                   subset_text(s));
        }
        const GpcExpansion& gt = it->second.expansion;
        const auto& tidx = gt.index_set();
        for (std::size_t r = 0; r < tidx.size(); ++r) {
            std::fill(alpha.begin(), alpha.end(), 0);
            const auto a = tidx[r];
            for (std::size_t i = 0; i < pos.size(); ++i) alpha[pos[i]] = a[i];
            const auto target = idx.find(alpha);
            if (!target) {
                throw std::logic_error("term " + subset_text(t) + " exceeds the order of " +
                                       subset_text(s));
            }
            c(static_cast<Eigen::Index>(*target), 0) -= gt.coefficients()(static_cast<Eigen::Index>(r), 0);
        }
    }
    AnovaTerm term{s, GpcExpansion(idx, g_hat.bases(), c), 0.0, 0.0};
    term.variance = c.rows() > 1 ? c.col(0).tail(c.rows() - 1).squaredNorm() : 0.0;
    return term;
}

std::vector<std::uint64_t> AnovaDecomposition::level_counts() const {
    std::vector<std::uint64_t> n(m, 0);
    for (const auto& t : terms) n[t.s.size() - 1] += 1;
    return n;
}

AnovaDecomposition adaptive_anova(const TermSolver& solver,
                                  const std::function<double(const AnchorPoint&)>& anchor_run,
                                  const std::vector<Distribution>& distributions,
                                  const AnovaOptions& options) {
    const std::size_t d = distributions.size();
    if (options.m > d) throw InputError("effective dimension m exceeds the parameter count");
    if (options.m > options.selection.tensor_cap) {
        throw InputError("effective dimension m=" + std::to_string(options.m) +
                         " exceeds the tensor cap of " + std::to_string(options.selection.tensor_cap));
    }
    if (!(options.sigma >= 0.0)) throw InputError("sigma must be >= 0");
    if (options.p < 0) throw InputError("order must be >= 0");

    std::vector<OrthoBasis> bases;
    for (const auto& dist : distributions) {
        bases.push_back(dist.is_named() ? polychaos::make_standard_basis(dist, options.p)
                                        : polychaos::stieltjes_basis(dist, options.p));
    }
    // Variables with equal marginals share testing points.
    std::vector<std::size_t> cls(d);
    for (std::size_t k = 0; k < d; ++k) {
        cls[k] = k;
        for (std::size_t j = 0; j < k; ++j) {
            if (distributions[j] == distributions[k]) {
                cls[k] = cls[j];
                break;
            }
        }
    }
    std::map<std::vector<std::size_t>, stsolver::SpectralSpace> spaces;

    AnovaDecomposition out{0.0,   {},          {}, 0.0, options.m, options.sigma, options.p,
                           make_anchor(distributions, options.anchor_unit),
                           SparseExpansion(bases), 0};
    out.g0 = anchor_run(out.anchor);
    out.samples = 1;
    out.expansion.add({}, out.g0);

    std::map<Subset, AnovaTerm> computed;
    std::set<Subset> pruned;
    for (std::size_t k = 1; k <= options.m; ++k) {
        std::vector<Subset> level;
        for (Subset& s : combinations(d, k)) {
            if (!has_pruned_subset(s, pruned)) level.push_back(std::move(s));
        }
        std::vector<const stsolver::SpectralSpace*> space_of(level.size());
        for (std::size_t i = 0; i < level.size(); ++i) {
            std::vector<std::size_t> key;
            for (std::size_t v : level[i]) key.push_back(cls[v]);
            auto it = spaces.find(key);
            if (it == spaces.end()) {
                std::vector<OrthoBasis> sub;
                for (std::size_t v : level[i]) sub.push_back(bases[v]);
                it = spaces.emplace(key, stsolver::make_space(std::move(sub), options.p, options.selection))
                         .first;
            }
            space_of[i] = &it->second;
        }

        std::vector<std::optional<GpcExpansion>> g_hat(level.size());
        parallel_for(level.size(), options.threads, [&](std::size_t i) {
            try {
                g_hat[i] = solver(level[i], out.anchor, *space_of[i]);
            } catch (const NumericError& e) {
                throw NumericError("ANOVA term " + subset_text(level[i]) + ": " + e.what());
            } catch (const InputError& e) {
                throw InputError("ANOVA term " + subset_text(level[i]) + ": " + e.what());
            }
        });

        std::vector<AnovaTerm> terms;
        for (std::size_t i = 0; i < level.size(); ++i) {
            terms.push_back(compose_term(*g_hat[i], level[i], out.g0, computed, pruned));
            out.beta += terms.back().variance;
            out.samples += space_of[i]->size();
        }
        for (AnovaTerm& t : terms) {
            t.theta = out.beta > 0.0 ? t.variance / out.beta : 0.0;
            if (t.theta < options.sigma && k < options.m) pruned.insert(t.s);
        }
        for (AnovaTerm& t : terms) {
            out.expansion.add_embedded(t.expansion, t.s);
            computed.emplace(t.s, t);
            out.terms.push_back(std::move(t));
        }
        out.active.push_back(std::move(level));
    }
    return out;
}

AnovaDecomposition adaptive_anova(const ScalarFn& g, const std::vector<Distribution>& distributions,
                                  const AnovaOptions& options) {
    TermSolver solver = [&g](const Subset& s, const AnchorPoint& anchor,
                             const stsolver::SpectralSpace& space) {
        return anchored_subterm(g, s, anchor, space);
    };
    auto anchor_run = [&g](const AnchorPoint& a) { return g(a.q); };
    return adaptive_anova(solver, anchor_run, distributions, options);
}

AnovaDecomposition adaptive_anova(const models::StochasticDae& model, std::size_t output,
                                  const AnovaOptions& options, const stsolver::DcOptions& dc) {
    model.validate();
    const TermSolver solver = dae_term_solver(model, output, dc);
    auto anchor_run = [&](const AnchorPoint& a) {
        const Vector guess = dc.initial_guess ? *dc.initial_guess
                                              : Vector(Vector::Zero(static_cast<Eigen::Index>(model.n)));
        const stsolver::NewtonResult r =
            stsolver::solve_operating_point(model, a.q, guess, dc.newton, dc.t);
        return r.x[static_cast<Eigen::Index>(output)];
    };
    return adaptive_anova(solver, anchor_run, model.distributions, options);
}

std::uint64_t sample_count(const std::vector<std::uint64_t>& n_k, int p) {
    if (p < 0) throw InputError("order must be >= 0");
    u128 total = 1;
    for (std::size_t i = 0; i < n_k.size(); ++i) {
        const std::uint64_t per = polychaos::total_degree_count(i + 1, p);
        total += static_cast<u128>(n_k[i]) * per;
        if (total > kMax) throw InputError("sample count overflows 64 bits");
    }
    return static_cast<std::uint64_t>(total);
}

std::vector<std::uint64_t> full_level_counts(std::size_t d, std::size_t m) {
    std::vector<std::uint64_t> out;
    for (std::size_t k = 1; k <= m; ++k) out.push_back(binomial(d, k));
    return out;
}

std::uint64_t full_term_count(std::size_t d, std::size_t m) {
    u128 total = 1;
    for (std::uint64_t c : full_level_counts(d, m)) {
        total += c;
        if (total > kMax) throw InputError("term count overflows 64 bits");
    }
    return static_cast<std::uint64_t>(total);
}

}  // namespace uqsim::anova
