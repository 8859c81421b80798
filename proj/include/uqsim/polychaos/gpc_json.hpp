#pragma once

#include "uqsim/polychaos/gpc_expansion.hpp"

#include <json.hpp>

#include <filesystem>

namespace uqsim::polychaos {

/// Schema:
///   { "dimension": d, "order": p,
///     "families": [ { "family": "hermite",
///                     "distribution": { "kind": "gaussian", "params": [...],
///                                       "lower": x|null, "upper": x|null } | null,
///                     "gamma": [p_j + 1 values], "kappa": [p_j + 1 values] } ],
///     "indices": [[alpha_1..alpha_d], ...],
///     "coefficients": [[x_k,1..x_k,n], ...] }
///
/// gamma carries the extra diagonal entry of the Jacobi matrix. Infinite
/// support bounds are null. Doubles round-trip exactly.
/// Custom distributions serialize as kind "custom" without a density; they
/// reload as basis-only (recurrence without distribution).
[[nodiscard]] nlohmann::json to_json(const GpcExpansion& expansion);
[[nodiscard]] GpcExpansion expansion_from_json(const nlohmann::json& doc);

[[nodiscard]] nlohmann::json to_json(const OrthoBasis& basis);
[[nodiscard]] OrthoBasis basis_from_json(const nlohmann::json& doc);

[[nodiscard]] GpcExpansion read_expansion(const std::filesystem::path& path);

}  // namespace uqsim::polychaos
