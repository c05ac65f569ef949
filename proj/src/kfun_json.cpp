#include "isscert/kfun_json.hpp"

#include <set>

namespace isscert {

namespace {

using nlohmann::json;

void require_keys(const json& j, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError("comparison function must be a JSON object");
  std::set<std::string> allowed{"kind"};
  for (const char* k : keys) {
    allowed.insert(k);
    if (!j.contains(k)) {
      throw ConfigError("comparison function of kind '" + j.value("kind", std::string("?")) +
                        "' is missing field '" + k + "'");
    }
  }
  for (const auto& [k, _] : j.items()) {
    if (!allowed.count(k)) throw ConfigError("unknown field '" + k + "' in comparison function");
  }
}

double number(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::vector<KFun> operands(const json& j) {
  const auto& a = j.at("args");
  if (!a.is_array() || a.empty()) throw ConfigError("'args' must be a nonempty array");
  std::vector<KFun> out;
  for (const auto& e : a) out.push_back(kfun_from_json(e));
  return out;
}

json list(const char* kind, const std::vector<KFun>& kids) {
  json args = json::array();
  for (const auto& k : kids) args.push_back(to_json(k));
  return json{{"kind", kind}, {"args", args}};
}

}  // namespace

json to_json(const KFun& f) {
  const auto& p = f.params();
  const auto& c = f.children();
  switch (f.kind()) {
    case KFun::Kind::Linear: return {{"kind", "linear"}, {"a", p[0]}};
    case KFun::Kind::Power: return {{"kind", "power"}, {"a", p[0]}, {"p", p[1]}};
    case KFun::Kind::Saturation: return {{"kind", "saturation"}, {"a", p[0]}};
    case KFun::Kind::Log1p: return {{"kind", "log1p"}, {"a", p[0]}};
    case KFun::Kind::AffineCap:
      return {{"kind", "affine_cap"}, {"slope", p[0]}, {"knot", p[1]}, {"tail", p[2]}};
    case KFun::Kind::Compose:
      return {{"kind", "compose"}, {"outer", to_json(c[0])}, {"inner", to_json(c[1])}};
    case KFun::Kind::Max: return list("max", c);
    case KFun::Kind::Min: return list("min", c);
    case KFun::Kind::Sum: return list("sum", c);
    case KFun::Kind::GeoMean: return list("geomean", c);
    case KFun::Kind::Inverse: return {{"kind", "inverse"}, {"of", to_json(c[0])}};
  }
  return {};
}

KFun kfun_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError("comparison function needs a string 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "identity") {
      require_keys(j, {});
      return KFun::identity();
    }
    if (kind == "linear") {
      require_keys(j, {"a"});
      return KFun::linear(number(j, "a"));
    }
    if (kind == "power") {
      require_keys(j, {"a", "p"});
      return KFun::power(number(j, "a"), number(j, "p"));
    }
    if (kind == "saturation") {
      require_keys(j, {"a"});
      return KFun::saturation(number(j, "a"));
    }
    if (kind == "log1p") {
      require_keys(j, {"a"});
      return KFun::log1p(number(j, "a"));
    }
    if (kind == "affine_cap") {
      require_keys(j, {"slope", "knot", "tail"});
      return KFun::affine_cap(number(j, "slope"), number(j, "knot"), number(j, "tail"));
    }
    if (kind == "compose") {
      require_keys(j, {"outer", "inner"});
      return compose(kfun_from_json(j.at("outer")), kfun_from_json(j.at("inner")));
    }
    if (kind == "max" || kind == "min" || kind == "sum") {
      require_keys(j, {"args"});
      const auto ops = operands(j);
      if (kind == "max") return pointwise_max(ops);
      if (kind == "min") return pointwise_min(ops);
      return sum(ops);
    }
    if (kind == "geomean") {
      require_keys(j, {"args"});
      const auto ops = operands(j);
      if (ops.size() != 2) throw ConfigError("geomean takes exactly two operands");
      return geometric_mean(ops[0], ops[1]);
    }
    if (kind == "inverse") {
      require_keys(j, {"of"});
      return inverse(kfun_from_json(j.at("of")));
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid comparison function: ") + e.what());
  } catch (const ClassError& e) {
    throw ConfigError(std::string("invalid comparison function: ") + e.what());
  }
  throw ConfigError("unknown comparison function kind '" + kind + "'");
}

}  // namespace isscert
