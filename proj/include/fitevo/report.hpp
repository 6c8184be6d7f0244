#pragma once

#include <json.hpp>

#include "fitevo/config.hpp"

namespace fitevo {

/// Finite values as JSON numbers, infinities as "+inf" / "-inf".
nlohmann::json to_json(const ExtendedReal& x);

/// Theory report for `analyze`: critical fitness, limit shape, recurrence at
/// f_c, kill dynamics. Quantities undefined in the current regime are null
/// and listed with their reason under "undefined".
nlohmann::json analysis_report(const ModelConfig& cfg);

/// Per-step replica statistics plus run metadata for `simulate`.
nlohmann::json aggregate_report(const ModelConfig& cfg, const Aggregate& agg);

}  // namespace fitevo
