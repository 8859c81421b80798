#pragma once

#include "uqsim/netlist/mna.hpp"
#include "uqsim/stsolver/dc.hpp"
#include "uqsim/stsolver/transient.hpp"

#include <map>
#include <vector>

namespace uqsim::hier {

using polychaos::OrthoBasis;

/// Basis per zeta index (1-based, as written in zeta(i, scale)).
using ZetaBases = std::map<int, OrthoBasis>;

/// Bases for every parameter slot of a system-level elaboration: zeta slots
/// take their intermediate basis, ordinary slots the standard basis of their
/// marginal. Throws InputError when a zeta index has no basis or a basis is
/// below order p.
[[nodiscard]] std::vector<OrthoBasis> system_bases(const netlist::Elaboration& elaboration,
                                                   const ZetaBases& zeta, int p);

/// Spectral space whose testing points are drawn from the Gauss rules of
/// the given bases (the intermediate rules for zeta slots).
[[nodiscard]] stsolver::SpectralSpace system_space(std::vector<OrthoBasis> bases, int p,
                                                   const stsolver::SelectionOptions& options = {});

/// Stochastic DC of the system level over the intermediate variables.
[[nodiscard]] stsolver::DcResult propagate_dc(const models::StochasticDae& model,
                                              const stsolver::SpectralSpace& space,
                                              const stsolver::DcOptions& options = {});

/// Stochastic transient of the system level over the intermediate variables.
[[nodiscard]] stsolver::StSolution propagate_transient(const models::StochasticDae& model,
                                                       const stsolver::SpectralSpace& space,
                                                       const stsolver::TransientOptions& options);

}  // namespace uqsim::hier
