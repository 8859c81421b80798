#pragma once

#include "uqsim/netlist/netlist.hpp"

#include <string>

namespace uqsim::netlist {

/// Canonical text form. parse_netlist(print_netlist(nl)) == nl, with every
/// parameter (defaults included) written out explicitly.
[[nodiscard]] std::string print_netlist(const Netlist& netlist);

}  // namespace uqsim::netlist
