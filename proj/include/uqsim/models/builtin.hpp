#pragma once

#include "uqsim/models/second_order.hpp"
#include "uqsim/models/stochastic_dae.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace uqsim::models {

using BuiltinParams = std::map<std::string, double>;

struct BuiltinModel {
    StochasticDae dae;
    /// Unknown reported by default (CLI summaries, ANOVA target).
    std::string output;
};

/// Registry (names accept '-' for '_'):
///   divider          V=1 through R1 into R2 to ground; R2 relative uniform +-tol.
///                    params: r1=1k r2=1k tol=0.1
///   rc_lowpass       V -> R -> C; R relative uniform +-tol.
///                    params: r=1k c=1u tol=0.1 step=0 (1: 0->1 V step at t=0)
///   diode_rectifier  V=1 -> R (relative uniform +-tol) -> diode to ground;
///                    Is = is * exp(xi), xi ~ N(0, is_sigma).
///                    params: r=1k is=1e-14 tol=0.1 is_sigma=0.5
///   plate_actuator   parallel-plate actuator, see plate_actuator_model.
///   opamp_like       NMOS differential pair with resistive loads and a PMOS
///                    common-source output stage; 10 parameters.
/// Unknown names or parameters throw InputError.
[[nodiscard]] BuiltinModel builtin_model(std::string_view name, const BuiltinParams& params = {});

[[nodiscard]] std::vector<std::string> builtin_names();

/// Netlist text behind the circuit builtins (empty for plate_actuator).
[[nodiscard]] std::string builtin_netlist(std::string_view name, const BuiltinParams& params = {});

/// m z'' + c z' + k z - alpha V^2 / (g - z)^2 = 0 with
///   g = gap (1 + gap_rel xi_1),  k = k (1 + k_rel xi_2),  xi ~ N(0, 1)^2,
///   V(t) = voltage for t > 0 (0 at t = 0).
/// params: m=1 c=0.5 k=1 gap=1 alpha=1 voltage=0.3 gap_rel=0.05 k_rel=0.05
/// A closed gap (g - z <= 0) raises NumericError.
[[nodiscard]] SecondOrderModel plate_actuator_model(const BuiltinParams& params = {});

[[nodiscard]] std::string canonical_builtin_name(std::string_view name);

}  // namespace uqsim::models
