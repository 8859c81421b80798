#include "uqsim/hier/propagate.hpp"

#include "uqsim/common/error.hpp"

namespace uqsim::hier {

namespace {

OrthoBasis truncate(const OrthoBasis& b, int p) {
    if (b.order() == p) return b;
    const auto g = b.jacobi_gamma();
    const auto k = b.kappa();
    return OrthoBasis(std::vector<double>(g.begin(), g.begin() + p + 1),
                      std::vector<double>(k.begin(), k.begin() + p + 1), b.family(),
                      b.distribution());
}

}  // namespace

std::vector<OrthoBasis> system_bases(const netlist::Elaboration& elaboration, const ZetaBases& zeta,
                                     int p) {
    const auto& dists = elaboration.dae.distributions;
    std::vector<OrthoBasis> out;
    for (std::size_t j = 0; j < dists.size(); ++j) {
        const auto& zi = j < elaboration.zeta.size() ? elaboration.zeta[j] : std::nullopt;
        if (zi) {
            auto it = zeta.find(*zi);
            if (it == zeta.end()) {
                throw InputError("no intermediate basis supplied for zeta(" + std::to_string(*zi) + ")");
            }
            if (it->second.order() < p) {
                throw InputError("intermediate basis for zeta(" + std::to_string(*zi) +
                                 ") has order " + std::to_string(it->second.order()) +
                                 " < " + std::to_string(p));
            }
            out.push_back(truncate(it->second, p));
        } else {
            out.push_back(dists[j].is_named() ? polychaos::make_standard_basis(dists[j], p)
                                              : polychaos::stieltjes_basis(dists[j], p));
        }
    }
    return out;
}

stsolver::SpectralSpace system_space(std::vector<OrthoBasis> bases, int p,
                                     const stsolver::SelectionOptions& options) {
    for (auto& b : bases) {
        if (b.order() < p) throw InputError("system basis below the requested order");
        b = truncate(b, p);
    }
    return stsolver::make_space(std::move(bases), p, options);
}

stsolver::DcResult propagate_dc(const models::StochasticDae& model,
                                const stsolver::SpectralSpace& space,
                                const stsolver::DcOptions& options) {
    return stsolver::solve_dc(model, space, options);
}

stsolver::StSolution propagate_transient(const models::StochasticDae& model,
                                         const stsolver::SpectralSpace& space,
                                         const stsolver::TransientOptions& options) {
    return stsolver::integrate_transient(model, space, options);
}

}  // namespace uqsim::hier
