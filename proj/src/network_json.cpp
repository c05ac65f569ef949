#include "isscert/network_json.hpp"

#include <set>

#include "isscert/kfun_json.hpp"

namespace isscert {

using nlohmann::json;

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, _] : j.items()) {
    if (!ok.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

namespace {

Maf maf_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "max") return Maf::max();
    if (s == "sum") return Maf::sum();
    throw ConfigError("unknown aggregation '" + s + "'");
  }
  reject_unknown_keys(j, {"kind", "p"}, "aggregation");
  if (j.value("kind", std::string()) != "pnorm" || !j.contains("p") || !j.at("p").is_number()) {
    throw ConfigError("custom aggregation must be {\"kind\":\"pnorm\",\"p\":<number>}");
  }
  return Maf::pnorm(j.at("p").get<double>());
}

json maf_to_json(const Maf& m) {
  switch (m.kind()) {
    case Maf::Kind::Max: return "max";
    case Maf::Kind::Sum: return "sum";
    case Maf::Kind::PNorm: return json{{"kind", "pnorm"}, {"p", m.p()}};
  }
  return nullptr;
}

int index_field(const json& e, const char* key, int n) {
  if (!e.contains(key) || !e.at(key).is_number_integer()) {
    throw ConfigError(std::string("gain entry needs integer '") + key + "'");
  }
  const int v = e.at(key).get<int>();
  if (v < 0 || v >= n) throw ConfigError(std::string("gain index '") + key + "' out of range");
  return v;
}

}  // namespace

GainOperator network_from_json(const json& j) {
  reject_unknown_keys(j, {"n", "gains", "invariant_row", "periodic", "aggregation",
                          "allow_diagonal"},
                      "network");
  if (!j.contains("n") || !j.at("n").is_number_integer() || j.at("n").get<int>() < 1) {
    throw ConfigError("network needs a positive integer 'n'");
  }
  const int n = j.at("n").get<int>();
  const bool diag = j.value("allow_diagonal", false);

  std::optional<GainMatrix> g;
  try {
    if (j.contains("invariant_row")) {
      if (j.contains("gains")) throw ConfigError("network has both 'gains' and 'invariant_row'");
      std::map<int, KFun> row;
      for (const auto& e : j.at("invariant_row")) {
        reject_unknown_keys(e, {"offset", "gain"}, "invariant_row entry");
        if (!e.contains("offset") || !e.at("offset").is_number_integer() || !e.contains("gain")) {
          throw ConfigError("invariant_row entries need integer 'offset' and 'gain'");
        }
        row.emplace(e.at("offset").get<int>(), kfun_from_json(e.at("gain")));
      }
      g = GainMatrix::spatially_invariant(n, row, j.value("periodic", true));
    } else {
      if (j.contains("periodic")) throw ConfigError("'periodic' only applies to invariant_row");
      g = GainMatrix(n, diag);
      if (j.contains("gains")) {
        if (!j.at("gains").is_array()) throw ConfigError("'gains' must be an array");
        for (const auto& e : j.at("gains")) {
          reject_unknown_keys(e, {"i", "j", "gain"}, "gain entry");
          if (!e.contains("gain")) throw ConfigError("gain entry needs 'gain'");
          g->set(index_field(e, "i", n), index_field(e, "j", n), kfun_from_json(e.at("gain")));
        }
      }
    }
  } catch (const ShapeError& e) {
    throw ConfigError(e.what());
  } catch (const ClassError& e) {
    throw ConfigError(e.what());
  }

  if (!j.contains("aggregation")) throw ConfigError("network needs 'aggregation'");
  const json& agg = j.at("aggregation");
  if (agg.is_array()) {
    if (static_cast<int>(agg.size()) != n) throw ConfigError("aggregation list must have n rows");
    std::vector<Maf> rows;
    for (const auto& a : agg) rows.push_back(maf_from_json(a));
    return GainOperator(std::move(*g), std::move(rows));
  }
  return GainOperator(std::move(*g), maf_from_json(agg));
}

json to_json(const GainOperator& op) {
  const int n = op.size();
  json out{{"n", n}};
  const auto& g = op.gains();
  if (g.invariant_row()) {
    json row = json::array();
    for (const auto& [d, f] : *g.invariant_row()) row.push_back({{"offset", d}, {"gain", to_json(f)}});
    out["invariant_row"] = row;
    out["periodic"] = g.periodic();
  } else {
    json gains = json::array();
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        if (g(i, k)) gains.push_back({{"i", i}, {"j", k}, {"gain", to_json(*g(i, k))}});
      }
    }
    out["gains"] = gains;
    if (g.allow_diagonal()) out["allow_diagonal"] = true;
  }
  bool uniform = true;
  for (const auto& m : op.mafs()) {
    uniform &= m.kind() == op.mafs()[0].kind() && m.p() == op.mafs()[0].p();
  }
  if (uniform) {
    out["aggregation"] = maf_to_json(op.mafs()[0]);
  } else {
    json rows = json::array();
    for (const auto& m : op.mafs()) rows.push_back(maf_to_json(m));
    out["aggregation"] = rows;
  }
  return out;
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(std::string(what) + " must be an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

json to_json(const SmallGainVerdict& v) {
  json out{{"mode", to_string(v.mode)},
           {"verdict", to_string(v.verdict)},
           {"iterations", v.iterations},
           {"samples", v.samples},
           {"seed", v.seed},
           {"method", v.method},
           {"notes", v.notes}};
  if (v.witness) out["witness"] = vec_to_json(*v.witness);
  if (v.radius) out["radius"] = *v.radius;
  return out;
}

}  // namespace isscert
