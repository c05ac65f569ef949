#pragma once

#include <json.hpp>

#include "isscert/gain_operator.hpp"
#include "isscert/small_gain.hpp"

namespace isscert {

// Network file: n, gains as (i, j, KFun) with 0-based indices, aggregation
// per row. Throws ConfigError on malformed input.
GainOperator network_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GainOperator& op);

nlohmann::json to_json(const SmallGainVerdict& v);
nlohmann::json vec_to_json(const Vec& v);
Vec vec_from_json(const nlohmann::json& j, const char* what);

// Rejects keys of `j` that are not in `allowed`.
void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const char* where);

}  // namespace isscert
