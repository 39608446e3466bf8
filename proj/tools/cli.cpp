#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <thread>

#include "sprec/errors.hpp"
#include "sprec/rng.hpp"

namespace sprec::cli {
namespace {

const char* kToolVersion = SPREC_VERSION;

struct Meta {
  std::uint64_t seed;
  std::uint64_t samples;
  std::string method;
};

std::string emit_json(Json doc, const Meta& m) {
  doc["seed"] = m.seed;
  doc["samples"] = m.samples;
  doc["method"] = m.method;
  doc["tool_version"] = kToolVersion;
  return doc.dump(2) + "\n";
}

std::string csv_header(const Meta& m) {
  std::ostringstream out;
  out << "# tool_version=" << kToolVersion << " seed=" << m.seed << " samples=" << m.samples
      << " method=" << m.method << "\n";
  return out.str();
}

bool want_csv(const RunConfig& c) { return c.output == "csv"; }

Distribution marginal_or_uniform(const Json& input, const char* key) {
  const auto it = input.find(key);
  return it == input.end() ? Distribution::uniform(0.0, 1.0) : parse_distribution(*it);
}

EvaluationOptions options(const RunConfig& c) {
  EvaluationOptions o;
  o.samples = c.samples;
  o.seed = c.seed;
  o.tol = c.tol;
  o.workers = c.workers;
  return o;
}

PrecedenceReport evaluate(const RunConfig& c, const Json& input, const Copula& cop,
                          const Distribution& g1, const Distribution& g2) {
  std::string method = "auto";
  if (const auto it = input.find("method"); it != input.end()) {
    if (!it->is_string()) throw SchemaError("'method' must be a string");
    method = it->get<std::string>();
  }
  if (method == "auto") return eta_best(cop, g1, g2, options(c));
  if (method == "closed_form") {
    const auto e = eta_exact(cop, g1, g2);
    if (!e) throw InvalidArgument("no closed form for this copula and marginals");
    PrecedenceReport r;
    r.eta = e->eta;
    r.xi = e->xi;
    return r;
  }
  if (method == "discrete_exact") return eta_discrete_exact(cop, g1, g2);
  if (method == "quadrature") return eta_quadrature(cop, g1, g2, c.tol);
  if (method == "monte_carlo") return eta_mc(cop, g1, g2, c.samples, c.seed, c.workers);
  throw SchemaError("unknown method '" + method + "'");
}

Json report_json(const PrecedenceReport& r) {
  Json j = to_json(r);
  j.erase("seed");
  j.erase("samples");
  j.erase("method");
  return j;
}

RunResult cmd_eta(const RunConfig& c, const Json& input) {
  const Copula cop = parse_copula(require(input, "copula", "input"));
  const Distribution g1 = marginal_or_uniform(input, "g1");
  const Distribution g2 = marginal_or_uniform(input, "g2");
  const PrecedenceReport r = evaluate(c, input, cop, g1, g2);
  const Meta meta{c.seed, r.samples, std::string(to_string(r.method))};

  std::optional<bool> holds;
  bool unsure = false;
  if (c.gamma) {
    if (!(*c.gamma >= 0.0 && *c.gamma <= 1.0)) throw InvalidArgument("--gamma must lie in [0,1]");
    unsure = r.method == Method::monte_carlo && std::abs(r.eta - *c.gamma) < 3.0 * r.stderr_eta;
    if (!unsure) holds = r.eta >= *c.gamma;
  }

  RunResult out;
  out.exit_code = unsure ? ExitCode::inconclusive : ok;
  if (want_csv(c)) {
    std::string s = csv_header(meta) + "eta,xi,stderr_eta,stderr_xi";
    if (c.gamma) s += ",gamma,verdict";
    s += "\n" + format_number(r.eta) + "," + format_number(r.xi) + "," +
         format_number(r.stderr_eta) + "," + format_number(r.stderr_xi);
    if (c.gamma)
      s += "," + format_number(*c.gamma) + "," +
           (unsure ? "inconclusive" : (*holds ? "holds" : "fails"));
    out.output = s + "\n";
  } else {
    Json doc = report_json(r);
    if (c.gamma) {
      doc["gamma"] = *c.gamma;
      doc["verdict"] = unsure ? "inconclusive" : (*holds ? "holds" : "fails");
    }
    out.output = emit_json(std::move(doc), meta);
  }
  return out;
}

RunResult cmd_classify(const RunConfig& c, const Json& input) {
  const Copula cop = parse_copula(require(input, "copula", "input"));
  double gamma;
  if (c.gamma)
    gamma = *c.gamma;
  else
    gamma = require_number(input, "gamma", "input");
  const ClassVerdict v = classify(cop, gamma, c.tol);
  const Meta meta{c.seed, 0, "closed_form"};
  RunResult out;
  if (want_csv(c)) {
    out.output = csv_header(meta) + "gamma,eta,in_L_gamma,in_B_gamma,tolerance\n" +
                 format_number(v.gamma) + "," + format_number(v.eta_value) + "," +
                 (v.in_L_gamma ? "true" : "false") + "," + (v.in_B_gamma ? "true" : "false") +
                 "," + format_number(v.tolerance) + "\n";
  } else {
    out.output = emit_json(to_json(v), meta);
  }
  return out;
}

bool analytic_pair(const Distribution& a, const Distribution& b) {
  return (std::holds_alternative<Exponential>(a.kind()) &&
          std::holds_alternative<Exponential>(b.kind())) ||
         (std::holds_alternative<Normal>(a.kind()) && std::holds_alternative<Normal>(b.kind()));
}

RunResult cmd_order(const RunConfig& c, const Json& input) {
  const Distribution g1 = parse_distribution(require(input, "g1", "input"));
  const Distribution g2 = parse_distribution(require(input, "g2", "input"));
  std::string rel_name = "st";
  if (c.relation) {
    rel_name = *c.relation;
  } else if (const auto it = input.find("relation"); it != input.end()) {
    if (!it->is_string()) throw SchemaError("'relation' must be a string");
    rel_name = it->get<std::string>();
  }
  Relation rel;
  try {
    rel = relation_from_string(rel_name);
  } catch (const InvalidArgument& e) {
    throw SchemaError(e.what());
  }
  const OrderCheckResult r = check_order(rel, g1, g2, c.grid);
  const Meta meta{c.seed, 0, analytic_pair(g1, g2) ? "analytic" : "grid"};
  RunResult out;
  if (want_csv(c)) {
    out.output = csv_header(meta) + "relation,holds,witness,witness_upper,grid_size\n" +
                 std::string(to_string(r.relation)) + "," + (r.holds ? "true" : "false") + "," +
                 (r.witness ? format_number(*r.witness) : "") + "," +
                 (r.witness_upper ? format_number(*r.witness_upper) : "") + "," +
                 std::to_string(r.grid_size) + "\n";
  } else {
    out.output = emit_json(to_json(r), meta);
  }
  return out;
}

RunResult cmd_rank(const RunConfig& c, const Json& input) {
  const Distribution target = parse_distribution(require(input, "target", "input"));
  const Json& arr = require(input, "prospects", "input");
  if (!arr.is_array() || arr.empty()) throw SchemaError("'prospects' must be a non-empty array");
  std::vector<Prospect> prospects;
  for (const auto& p : arr) prospects.push_back(parse_prospect(p));
  const RankingTable t = rank_prospects(target, prospects, options(c));

  std::uint64_t used = 0;
  for (const auto& row : t.rows)
    if (row.kind == RowKind::estimate) used += c.samples;
  const Meta meta{c.seed, used, "per_row"};
  RunResult out;
  if (want_csv(c)) {
    std::string s = csv_header(meta);
    for (const auto& w : t.warnings) s += "# " + std::string(to_string(w.kind)) + ": " + w.message + "\n";
    s += "rank,name,eta_or_bound,kind,stderr,method,flagged\n";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& r = t.rows[i];
      s += std::to_string(i + 1) + "," + r.name + "," + format_number(r.eta_or_bound) + "," +
           std::string(to_string(r.kind)) + "," + format_number(r.stderr_eta) + "," +
           (r.method ? std::string(to_string(*r.method)) : "") + "," +
           (r.flagged ? "true" : "false") + "\n";
    }
    out.output = s;
  } else {
    out.output = emit_json(to_json(t), meta);
  }
  return out;
}

RunResult cmd_sample(const RunConfig& c, const Json& input) {
  const Copula cop = parse_copula(require(input, "copula", "input"));
  const auto draws = copula_sample(cop, c.seed, c.samples, c.workers);
  const Meta meta{c.seed, c.samples, "sample"};
  RunResult out;
  if (want_csv(c)) {
    std::string s = csv_header(meta) + "u,v,component,structural_tie\n";
    for (const auto& d : draws) {
      s += format_number(d.u) + "," + format_number(d.v) + "," +
           (d.component == Component::Singular ? "singular" : "absolutely_continuous") + "," +
           (d.structural_tie ? "1" : "0") + "\n";
    }
    out.output = std::move(s);
  } else {
    Json rows = Json::array();
    for (const auto& d : draws)
      rows.push_back({d.u, d.v, d.component == Component::Singular, d.structural_tie});
    out.output = emit_json(
        {{"columns", {"u", "v", "singular", "structural_tie"}}, {"rows", std::move(rows)}}, meta);
  }
  return out;
}

RunResult cmd_curve(const RunConfig& c, const Json& input) {
  Json base = {{"node", "gaussian"}};
  std::string parameter = "rho";
  double from = -0.9, to = 0.9, step = 0.1;
  if (const auto it = input.find("copula"); it != input.end()) base = *it;
  if (const auto it = input.find("parameter"); it != input.end()) {
    if (!it->is_string()) throw SchemaError("'parameter' must be a string");
    parameter = it->get<std::string>();
  }
  if (input.contains("from")) from = require_number(input, "from", "input");
  if (input.contains("to")) to = require_number(input, "to", "input");
  if (input.contains("step")) step = require_number(input, "step", "input");
  if (!(step > 0.0) || !(to >= from)) throw SchemaError("curve needs step > 0 and to >= from");
  const Distribution g1 =
      input.contains("g1") ? parse_distribution(input["g1"]) : Distribution::normal(0.0, 1.0);
  const Distribution g2 =
      input.contains("g2") ? parse_distribution(input["g2"]) : Distribution::normal(1.0, 1.0);

  const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
  struct Point {
    double x;
    PrecedenceReport r;
  };
  std::vector<Point> points;
  std::uint64_t used = 0;
  for (std::size_t i = 0; i < count; ++i) {
    // Round to the step's grid so 0.1 steps print as 0.1, not 0.09999999.
    const double x = std::round((from + static_cast<double>(i) * step) * 1e12) / 1e12;
    Json node = base;
    node[parameter] = x;
    EvaluationOptions o = options(c);
    o.seed = stream_seed(c.seed, i);
    points.push_back({x, eta_best(parse_copula(node), g1, g2, o)});
    used += points.back().r.samples;
  }
  const Meta meta{c.seed, used, "per_point"};
  RunResult out;
  if (want_csv(c)) {
    std::string s = csv_header(meta) + parameter + ",eta,xi,stderr_eta,method\n";
    for (const auto& p : points)
      s += format_number(p.x) + "," + format_number(p.r.eta) + "," + format_number(p.r.xi) + "," +
           format_number(p.r.stderr_eta) + "," + std::string(to_string(p.r.method)) + "\n";
    out.output = s;
  } else {
    Json rows = Json::array();
    for (const auto& p : points) {
      Json row = report_json(p.r);
      row[parameter] = p.x;
      row["method"] = std::string(to_string(p.r.method));
      rows.push_back(std::move(row));
    }
    out.output = emit_json({{"parameter", parameter}, {"points", std::move(rows)}}, meta);
  }
  return out;
}

RunResult cmd_verify(const RunConfig& c, const Json& input) {
  Json doc = run_verify(c, input);
  const bool passed = doc.at("passed").get<bool>();
  const Meta meta{c.seed, c.samples, "oracle"};
  RunResult out;
  out.exit_code = passed ? ok : checks_failed;
  if (want_csv(c)) {
    std::string s = csv_header(meta) + "check,passed,value,expected,tolerance\n";
    for (const auto& ch : doc.at("checks"))
      s += ch.at("name").get<std::string>() + "," + (ch.at("passed").get<bool>() ? "true" : "false") +
           "," + format_number(ch.at("value").get<double>()) + "," +
           format_number(ch.at("expected").get<double>()) + "," +
           format_number(ch.at("tolerance").get<double>()) + "\n";
    out.output = s;
  } else {
    out.output = emit_json(std::move(doc), meta);
  }
  return out;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

RunResult run(const RunConfig& config, const Json& input) {
  RunResult fail;
  try {
    if (config.output != "json" && config.output != "csv")
      throw SchemaError("--output must be json or csv");
    if (!input.is_object()) throw SchemaError("input must be a JSON object");
    const std::string& cmd = config.command;
    if (cmd == "eta" || cmd == "xi") return cmd_eta(config, input);
    if (cmd == "classify") return cmd_classify(config, input);
    if (cmd == "order") return cmd_order(config, input);
    if (cmd == "rank") return cmd_rank(config, input);
    if (cmd == "sample") return cmd_sample(config, input);
    if (cmd == "curve") return cmd_curve(config, input);
    if (cmd == "verify") return cmd_verify(config, input);
    throw SchemaError("unknown command '" + cmd + "'");
  } catch (const Inconclusive& e) {
    // Only reachable through library paths that raise it directly.
    fail.exit_code = inconclusive;
    fail.output = emit_json(report_json(e.report()), {config.seed, e.report().samples, "monte_carlo"});
    fail.error = e.what();
  } catch (const Error& e) {
    fail.exit_code = schema_error;
    fail.error = e.what();
  } catch (const Json::exception& e) {
    fail.exit_code = schema_error;
    fail.error = std::string("input: ") + e.what();
  }
  return fail;
}

Json load_input(const std::string& path) {
  if (path.empty()) return Json::object();
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open spec file '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("spec is not valid JSON: ") + e.what());
  }
}

unsigned workers_from_env() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("SP_COPULA_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(cap, &end, 10);
    if (end != cap && *end == '\0' && v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

}  // namespace sprec::cli
