#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "cli.hpp"
#include "sprec/errors.hpp"
#include "sprec/oracle.hpp"
#include "sprec/rng.hpp"

namespace sprec::cli {
namespace {

struct Check {
  std::string name;
  double value;
  double expected;
  double tolerance;
  bool passed;
};

Check near(std::string name, double value, double expected, double tol) {
  return {std::move(name), value, expected, tol, std::abs(value - expected) <= tol};
}

// value is the largest excess over an upper limit; passes when it is <= 0.
Check at_most_zero(std::string name, double excess) {
  return {std::move(name), excess, 0.0, 0.0, excess <= 0.0};
}

Check bracketed(std::string name, double value, const oracle::EtaBracket& b) {
  // The bracket is certified up to the rounding of summing grid^2 cells.
  return {std::move(name), value, 0.5 * (b.low + b.high), 0.5 * (b.high - b.low),
          b.contains(value, oracle::kBracketRounding)};
}

// Two-sided DKW band at confidence 1 - 1e-3.
double dkw(std::size_t n) { return std::sqrt(std::log(2.0 / 1e-3) / (2.0 * static_cast<double>(n))); }

template <class T, class Pred>
double fraction(const std::vector<T>& xs, Pred pred) {
  std::size_t k = 0;
  for (const auto& x : xs) k += pred(x) ? 1 : 0;
  return static_cast<double>(k) / static_cast<double>(xs.size());
}

std::vector<Check> load_sharing_checks(const RunConfig& c, std::uint64_t seed) {
  const oracle::LoadSharingModel model(2.0, 2.5);
  const auto pairs = oracle::load_sharing_sample(model, c.samples, seed, c.workers);
  const double n = static_cast<double>(pairs.size());
  std::vector<Check> out;
  out.push_back(near("load_sharing.p_x_le_y",
                     fraction(pairs, [](const oracle::Pair& p) { return p.x <= p.y; }),
                     model.prob_x_le_y(), 0.002));
  out.push_back(near("load_sharing.survival_at_0.5",
                     fraction(pairs, [](const oracle::Pair& p) { return p.x > 0.5; }),
                     model.survival_x(0.5), 0.003));
  double worst = -1.0;
  for (int i = 1; i <= 32; ++i) {
    const double x = 0.1 * i;
    const double emp = fraction(pairs, [x](const oracle::Pair& p) { return p.x > x; });
    const double bound = std::exp(-model.lambda * x);
    const double se = std::sqrt(std::max(bound * (1.0 - bound), 1e-300) / n);
    worst = std::max(worst, emp - bound - 3.0 * se);
  }
  out.push_back(at_most_zero("load_sharing.st_dominance", worst));
  return out;
}

std::vector<Check> order_stats_checks(const RunConfig& c, std::uint64_t seed) {
  const auto triples = oracle::order_stats_triple_sample(c.samples, seed, Distribution::uniform(0, 1),
                                                         c.workers);
  std::vector<Check> out;
  out.push_back(near("order_stats.t_le_x_prime",
                     fraction(triples, [](const oracle::Triple& t) { return t.t <= t.x_prime; }),
                     1.0, 0.0));
  out.push_back(near(
      "order_stats.t_le_x_double_prime",
      fraction(triples, [](const oracle::Triple& t) { return t.t <= t.x_double_prime; }), 0.9,
      0.002));
  double worst = -1.0;
  const double slack = 2.0 * dkw(triples.size());
  for (int i = 1; i <= 32; ++i) {
    const double x = i / 33.0;
    const double f1 = fraction(triples, [x](const oracle::Triple& t) { return t.x_prime <= x; });
    const double f2 =
        fraction(triples, [x](const oracle::Triple& t) { return t.x_double_prime <= x; });
    worst = std::max(worst, f2 - f1 - slack);
  }
  out.push_back(at_most_zero("order_stats.st_dominance", worst));
  return out;
}

std::vector<Check> mo_checks(const RunConfig& c, std::uint64_t seed) {
  const double a1 = 0.4, a2 = 0.2;
  const double d = a1 + a2 - a1 * a2;
  const auto draws = oracle::mo_construction_sample(a1, a2, c.samples, seed, c.workers);
  const double eta = fraction(draws, [](const oracle::ShockDraw& s) { return s.tie || s.x1 <= s.x2; });
  const double ties = fraction(draws, [](const oracle::ShockDraw& s) { return s.tie; });
  std::vector<Check> out;
  out.push_back(near("mo.construction_eta", eta, a2 / d, 0.002));
  out.push_back(near("mo.construction_strict", eta - ties, (1.0 - a1) * a2 / d, 0.002));
  out.push_back(near("mo.construction_xi", ties, a1 * a2 / d, 0.002));

  const auto mc = eta_mc(Copula::mo_connecting(a1, a2), Distribution::exponential(1.0 / a1),
                         Distribution::exponential(1.0 / a2), c.samples, stream_seed(seed, 1),
                         c.workers);
  const double se_oracle = std::sqrt(eta * (1.0 - eta) / static_cast<double>(draws.size()));
  out.push_back(near("mo.eta_mc_vs_construction", mc.eta, eta,
                     3.0 * std::hypot(se_oracle, mc.stderr_eta)));
  return out;
}

std::vector<Check> grid_checks(const RunConfig& c) {
  const Distribution u = Distribution::uniform(0, 1);
  const int grid = std::max(c.grid, 16);
  std::vector<Check> out;
  out.push_back(bracketed("grid.independence", 0.5,
                          oracle::grid_eta_oracle(Copula::independence(), u, u, grid)));
  out.push_back(bracketed("grid.shuffle_0.3", 0.3,
                          oracle::grid_eta_oracle(Copula::shuffle(0.3), u, u, grid)));
  const auto k = oracle::grid_eta_oracle(Copula::order_statistics(), u, u, grid);
  out.push_back(bracketed("grid.order_statistics", 2.0 - std::numbers::pi / 2.0, k));
  out.push_back(bracketed("grid.order_statistics_quadrature",
                          eta_quadrature(Copula::order_statistics(), u, u, c.tol).eta, k));
  return out;
}

}  // namespace

Json run_verify(const RunConfig& config, const Json& input) {
  std::vector<std::string> wanted;
  if (const auto it = input.find("checks"); it != input.end()) {
    if (!it->is_array()) throw SchemaError("'checks' must be an array of group names");
    for (const auto& g : *it) {
      if (!g.is_string()) throw SchemaError("'checks' must be an array of group names");
      wanted.push_back(g.get<std::string>());
    }
  }
  if (config.samples < 1000) throw InvalidArgument("verify needs --samples >= 1000");
  const auto enabled = [&](const std::string& group) {
    return wanted.empty() || std::find(wanted.begin(), wanted.end(), group) != wanted.end();
  };
  const std::vector<std::string> known = {"load_sharing", "order_stats", "mo", "grid"};
  for (const auto& w : wanted)
    if (std::find(known.begin(), known.end(), w) == known.end())
      throw SchemaError("unknown check group '" + w + "'");

  std::vector<Check> checks;
  auto add = [&](std::vector<Check> more) {
    checks.insert(checks.end(), more.begin(), more.end());
  };
  if (enabled("load_sharing")) add(load_sharing_checks(config, stream_seed(config.seed, 101)));
  if (enabled("order_stats")) add(order_stats_checks(config, stream_seed(config.seed, 102)));
  if (enabled("mo")) add(mo_checks(config, stream_seed(config.seed, 103)));
  if (enabled("grid")) add(grid_checks(config));

  Json arr = Json::array();
  bool all = true;
  for (const auto& ch : checks) {
    all = all && ch.passed;
    arr.push_back({{"name", ch.name},
                   {"passed", ch.passed},
                   {"value", ch.value},
                   {"expected", ch.expected},
                   {"tolerance", ch.tolerance}});
  }
  return {{"checks", std::move(arr)}, {"passed", all}};
}

}  // namespace sprec::cli
