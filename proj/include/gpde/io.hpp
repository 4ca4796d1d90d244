#pragma once

#include <string>

#include <json.hpp>

#include "gpde/derivator.hpp"
#include "gpde/silkworm.hpp"
#include "gpde/spectral.hpp"

namespace gpde {

/// Deterministic float formatting used by every CSV/JSON writer:
/// 17 significant digits, C locale, no trailing noise.
std::string fmt17(double v);

/// Derivator description: {"schema_version": 1, "period"?: P,
/// "g_at_zero"?: v, "segments": [{"kind": ..., "span": [a,b], ...,
/// "jump_after": d}, ...]}. Kinds: constant{level}, affine{start,slope},
/// identity{start}, sqrt_rise{from,to}, sqrt_fall{from,to}.
nlohmann::json derivator_to_json(const Derivator& d);
Derivator derivator_from_json(const nlohmann::json& j);

/// Resolves a CLI-facing derivator spec: a builtin name ("silkworm",
/// "identity" with the given horizon) or a path to a JSON description.
Derivator resolve_derivator(const std::string& spec, double horizon);

nlohmann::json hypothesis_report_to_json(const HypothesisReport& rep);

SilkwormParams silkworm_params_from_json(const nlohmann::json& j);
nlohmann::json silkworm_params_to_json(const SilkwormParams& p);

}  // namespace gpde
