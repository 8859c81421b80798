#pragma once

#include "uqsim/stsolver/transient.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace uqsim::stsolver {

/// Header "unknown,mean,std", one row per output of the expansion.
/// names must have one entry per output.
[[nodiscard]] std::string dc_stats_csv(const GpcExpansion& expansion,
                                       const std::vector<std::string>& names);

/// Header "t,<name>_mean,<name>_std,..." for the selected outputs
/// (all outputs when `selected` is empty), one row per recorded time.
[[nodiscard]] std::string transient_csv(const StSolution& solution,
                                        const std::vector<std::string>& names,
                                        const std::vector<std::size_t>& selected = {});

/// [{ "t": t_i, "expansion": <GpcExpansion schema> }, ...]
[[nodiscard]] nlohmann::json transient_json(const StSolution& solution);

}  // namespace uqsim::stsolver
