#pragma once

#include "uqsim/netlist/netlist.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace uqsim::netlist {

struct ParseOptions {
    /// Used as the location prefix in diagnostics.
    std::string filename = "<input>";
    /// Accept `zeta(i[,scale])` variations (system-level netlists only).
    bool allow_zeta = false;
};

/// Throws InputError with a "file:line:col: message" diagnostic.
[[nodiscard]] Netlist parse_netlist(std::string_view text, const ParseOptions& options = {});
[[nodiscard]] Netlist parse_netlist_file(const std::filesystem::path& path,
                                         ParseOptions options = {});

/// Number with optional scale suffix (f p n u m k meg g, any case).
/// Returns nullopt for anything else, including trailing letters.
[[nodiscard]] std::optional<double> parse_value(std::string_view text);

/// Distribution notation: uniform(lo,hi), gauss|normal|gaussian(mean,std),
/// gamma(shape), beta(a,b). Throws InputError (without location).
[[nodiscard]] Distribution parse_distribution(std::string_view text);

}  // namespace uqsim::netlist
