#pragma once

#include "uqsim/models/stochastic_dae.hpp"
#include "uqsim/netlist/netlist.hpp"

#include <optional>

namespace uqsim::netlist {

struct MnaOptions {
    /// Conductance added across every diode and MOSFET channel.
    double gmin = 1e-12;
};

struct Elaboration {
    models::StochasticDae dae;
    /// Per parameter slot: the zeta index it stands for, if any. Variations
    /// naming the same zeta index share one slot, whose placeholder marginal
    /// is a unit Gaussian; each variation applies its own scale.
    std::vector<std::optional<int>> zeta;
};

/// Unknowns: node voltages in order of first appearance (ground excluded),
/// then voltage-source currents, then inductor currents, all in element
/// order. Parameter slots follow the variation order (shared zeta slots at
/// their first use). Inputs are the independent sources in element order.
///
/// Throws InputError when some node has no DC-conductive path to ground.
[[nodiscard]] Elaboration elaborate_netlist(const Netlist& netlist, const MnaOptions& options = {});

/// elaborate_netlist(...).dae; rejects zeta variations.
[[nodiscard]] models::StochasticDae elaborate(const Netlist& netlist, const MnaOptions& options = {});

}  // namespace uqsim::netlist
