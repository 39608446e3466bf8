#include "sprec/json_io.hpp"

#include <cmath>
#include <string>

#include "sprec/errors.hpp"

namespace sprec {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

void expect_object(const Json& j, const char* where) {
  if (!j.is_object()) fail(where, "expected an object");
}

void allow_keys(const Json& j, std::initializer_list<const char*> keys, const char* where) {
  for (const auto& [k, _] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) fail(where, "unexpected key '" + k + "'");
  }
}

std::string require_string(const Json& j, const char* key, const char* where) {
  const Json& v = require(j, key, where);
  if (!v.is_string()) fail(where, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

// Turns constructor validation failures into schema errors.
template <class Fn>
auto build(const char* where, Fn fn) {
  try {
    return fn();
  } catch (const SchemaError&) {
    throw;
  } catch (const InvalidArgument& e) {
    fail(where, e.what());
  }
}

std::vector<std::pair<double, double>> pairs(const Json& j, const char* key, const char* where) {
  const Json& arr = require(j, key, where);
  if (!arr.is_array()) fail(where, std::string("'") + key + "' must be an array");
  std::vector<std::pair<double, double>> out;
  for (const auto& item : arr) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number())
      fail(where, std::string("'") + key + "' entries must be [number, number]");
    out.emplace_back(item[0].get<double>(), item[1].get<double>());
  }
  return out;
}

Json optional_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (!std::isfinite(*v)) return *v > 0 ? "inf" : "-inf";
  return *v;
}

}  // namespace

const Json& require(const Json& j, const char* key, const char* where) {
  expect_object(j, where);
  const auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing '") + key + "'");
  return *it;
}

double require_number(const Json& j, const char* key, const char* where) {
  const Json& v = require(j, key, where);
  if (!v.is_number()) fail(where, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

Distribution parse_distribution(const Json& j) {
  constexpr const char* where = "distribution";
  const std::string kind = require_string(j, "kind", where);
  return build(where, [&] {
    if (kind == "uniform") {
      allow_keys(j, {"kind", "a", "b"}, where);
      return Distribution::uniform(require_number(j, "a", where), require_number(j, "b", where));
    }
    if (kind == "exponential") {
      allow_keys(j, {"kind", "rate"}, where);
      return Distribution::exponential(require_number(j, "rate", where));
    }
    if (kind == "normal") {
      allow_keys(j, {"kind", "mean", "sd"}, where);
      return Distribution::normal(require_number(j, "mean", where), require_number(j, "sd", where));
    }
    if (kind == "atoms") {
      allow_keys(j, {"kind", "points"}, where);
      std::vector<Atom> pts;
      for (auto [x, p] : pairs(j, "points", where)) pts.push_back({x, p});
      return Distribution::atoms(std::move(pts));
    }
    if (kind == "pwl") {
      allow_keys(j, {"kind", "knots"}, where);
      std::vector<Knot> knots;
      for (auto [x, p] : pairs(j, "knots", where)) knots.push_back({x, p});
      return Distribution::piecewise_linear(std::move(knots));
    }
    fail(where, "unknown kind '" + kind + "'");
  });
}

Copula parse_copula(const Json& j) {
  constexpr const char* where = "copula";
  const std::string node = require_string(j, "node", where);
  return build(where, [&]() -> Copula {
    if (node == "independence" || node == "comonotone" || node == "countermonotone" ||
        node == "order_statistics") {
      allow_keys(j, {"node"}, where);
      if (node == "independence") return Copula::independence();
      if (node == "comonotone") return Copula::comonotone();
      if (node == "countermonotone") return Copula::countermonotone();
      return Copula::order_statistics();
    }
    if (node == "shuffle") {
      allow_keys(j, {"node", "gamma"}, where);
      return Copula::shuffle(require_number(j, "gamma", where));
    }
    if (node == "gaussian") {
      allow_keys(j, {"node", "rho"}, where);
      return Copula::gaussian(require_number(j, "rho", where));
    }
    if (node == "mo_survival" || node == "mo_connecting") {
      allow_keys(j, {"node", "alpha1", "alpha2"}, where);
      const double a1 = require_number(j, "alpha1", where);
      const double a2 = require_number(j, "alpha2", where);
      return node == "mo_survival" ? Copula::mo_survival(a1, a2) : Copula::mo_connecting(a1, a2);
    }
    if (node == "mixture") {
      allow_keys(j, {"node", "weights", "components"}, where);
      const Json& w = require(j, "weights", where);
      const Json& comps = require(j, "components", where);
      if (!w.is_array() || !comps.is_array()) fail(where, "mixture needs arrays");
      std::vector<double> weights;
      for (const auto& x : w) {
        if (!x.is_number()) fail(where, "weights must be numbers");
        weights.push_back(x.get<double>());
      }
      std::vector<Copula> components;
      for (const auto& c : comps) components.push_back(parse_copula(c));
      return mix(std::move(components), std::move(weights));
    }
    if (node == "transpose" || node == "survival") {
      allow_keys(j, {"node", "inner"}, where);
      const Copula inner = parse_copula(require(j, "inner", where));
      return node == "transpose" ? transpose(inner) : survival_of(inner);
    }
    fail(where, "unknown node '" + node + "'");
  });
}

Prospect parse_prospect(const Json& j) {
  constexpr const char* where = "prospect";
  allow_keys(j, {"name", "marginal", "copula", "gamma_bound"}, where);
  const bool has_copula = j.contains("copula");
  const bool has_bound = j.contains("gamma_bound");
  if (has_copula == has_bound) fail(where, "exactly one of 'copula' and 'gamma_bound' is required");
  Prospect p{require_string(j, "name", where), parse_distribution(require(j, "marginal", where)),
             GammaBound{0.0}};
  if (has_copula) {
    p.dependence = parse_copula(j.at("copula"));
  } else {
    const double g = require_number(j, "gamma_bound", where);
    if (!(g >= 0.0 && g <= 1.0)) fail(where, "gamma_bound must lie in [0,1]");
    p.dependence = GammaBound{g};
  }
  return p;
}

Json to_json(const Distribution& d) {
  return std::visit(overloaded{[](const Uniform& u) -> Json {
                                 return {{"kind", "uniform"}, {"a", u.a}, {"b", u.b}};
                               },
                               [](const Exponential& e) -> Json {
                                 return {{"kind", "exponential"}, {"rate", e.rate}};
                               },
                               [](const Normal& n) -> Json {
                                 return {{"kind", "normal"}, {"mean", n.mean}, {"sd", n.sd}};
                               },
                               [](const DiscreteAtoms& a) -> Json {
                                 Json pts = Json::array();
                                 for (const auto& p : a.points) pts.push_back({p.x, p.prob});
                                 return {{"kind", "atoms"}, {"points", pts}};
                               },
                               [](const PiecewiseLinearCdf& c) -> Json {
                                 Json knots = Json::array();
                                 for (const auto& k : c.knots) knots.push_back({k.x, k.p});
                                 return {{"kind", "pwl"}, {"knots", knots}};
                               }},
                    d.kind());
}

Json to_json(const Copula& c) {
  return std::visit(
      overloaded{[](const Independence&) -> Json { return {{"node", "independence"}}; },
                 [](const Comonotone&) -> Json { return {{"node", "comonotone"}}; },
                 [](const Countermonotone&) -> Json { return {{"node", "countermonotone"}}; },
                 [](const OrderStatistics&) -> Json { return {{"node", "order_statistics"}}; },
                 [](const Shuffle& s) -> Json { return {{"node", "shuffle"}, {"gamma", s.gamma}}; },
                 [](const Gaussian& g) -> Json { return {{"node", "gaussian"}, {"rho", g.rho}}; },
                 [](const MarshallOlkinSurvival& m) -> Json {
                   return {{"node", "mo_survival"}, {"alpha1", m.alpha1}, {"alpha2", m.alpha2}};
                 },
                 [](const MarshallOlkinConnecting& m) -> Json {
                   return {{"node", "mo_connecting"}, {"alpha1", m.alpha1}, {"alpha2", m.alpha2}};
                 },
                 [](const Mixture& m) -> Json {
                   Json comps = Json::array();
                   for (const auto& c : m.components) comps.push_back(to_json(c));
                   return {{"node", "mixture"}, {"weights", m.weights}, {"components", comps}};
                 },
                 [](const Transpose& t) -> Json {
                   return {{"node", "transpose"}, {"inner", to_json(t.inner)}};
                 },
                 [](const SurvivalOf& s) -> Json {
                   return {{"node", "survival"}, {"inner", to_json(s.inner)}};
                 }},
      c.node().value);
}

Json to_json(const PrecedenceReport& r) {
  Json j = {{"eta", r.eta},
            {"xi", r.xi},
            {"method", std::string(to_string(r.method))},
            {"stderr_eta", r.stderr_eta},
            {"stderr_xi", r.stderr_xi},
            {"samples", r.samples}};
  j["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
  return j;
}

Json to_json(const ClassVerdict& v) {
  return {{"gamma", v.gamma},
          {"in_L_gamma", v.in_L_gamma},
          {"in_B_gamma", v.in_B_gamma},
          {"eta_value", v.eta_value},
          {"tolerance", v.tolerance}};
}

Json to_json(const OrderCheckResult& r) {
  return {{"relation", std::string(to_string(r.relation))},
          {"holds", r.holds},
          {"witness", optional_number(r.witness)},
          {"witness_upper", optional_number(r.witness_upper)},
          {"grid_size", r.grid_size}};
}

Json to_json(const RankingTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json row = {{"name", r.name},
                {"eta_or_bound", r.eta_or_bound},
                {"kind", std::string(to_string(r.kind))},
                {"stderr", r.stderr_eta},
                {"flagged", r.flagged}};
    row["method"] = r.method ? Json(std::string(to_string(*r.method))) : Json(nullptr);
    rows.push_back(std::move(row));
  }
  Json warnings = Json::array();
  for (const auto& w : t.warnings)
    warnings.push_back({{"kind", std::string(to_string(w.kind))}, {"message", w.message}});
  return {{"rows", rows}, {"warnings", warnings}};
}

}  // namespace sprec
