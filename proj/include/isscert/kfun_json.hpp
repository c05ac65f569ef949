#pragma once

#include <json.hpp>

#include "isscert/kfun.hpp"

namespace isscert {

nlohmann::json to_json(const KFun& f);
// Throws ConfigError on unknown kinds, missing or extra fields.
KFun kfun_from_json(const nlohmann::json& j);

}  // namespace isscert
