#pragma once

#include "uqsim/anova/anova.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace uqsim::anova {

/// { "g0", "m", "sigma", "order", "beta", "level_counts": [n_1..n_m],
///   "term_count", "N_samples",
///   "terms": [{ "s": [0-based indices], "names": [...], "variance", "theta" }],
///   "S": [...], "T": [...], "parameters": [...] }
/// S and T are null when the assembled expansion has zero variance.
[[nodiscard]] nlohmann::json anova_report(const AnovaDecomposition& decomposition,
                                          const std::vector<std::string>& parameter_names = {});

/// Header "parameter,S,T".
[[nodiscard]] std::string sensitivity_csv(const Sensitivities& sens,
                                          const std::vector<std::string>& parameter_names = {});

}  // namespace uqsim::anova
