#include "sprec/tba.hpp"

#include <algorithm>

#include "sprec/errors.hpp"
#include "sprec/rng.hpp"

namespace sprec {

std::string_view to_string(RowKind k) noexcept {
  switch (k) {
    case RowKind::exact: return "exact";
    case RowKind::estimate: return "estimate";
    case RowKind::lower_bound: return "lower_bound";
  }
  return "exact";
}

std::string_view to_string(WarningKind k) noexcept {
  switch (k) {
    case WarningKind::mixed_comparability: return "MixedComparabilityWarning";
    case WarningKind::incomparable: return "Incomparable";
  }
  return "Incomparable";
}

RankingTable rank_prospects(const Distribution& target, const std::vector<Prospect>& prospects,
                            const EvaluationOptions& opts) {
  if (prospects.empty()) throw InvalidArgument("rank_prospects: no prospects");

  RankingTable table;
  std::vector<const Distribution*> marginal_of;
  for (std::size_t i = 0; i < prospects.size(); ++i) {
    const Prospect& p = prospects[i];
    RankingRow row;
    row.name = p.name;
    if (const auto* c = std::get_if<Copula>(&p.dependence)) {
      EvaluationOptions row_opts = opts;
      row_opts.seed = stream_seed(opts.seed, i);
      const PrecedenceReport r = eta_best(*c, target, p.marginal, row_opts);
      row.eta_or_bound = r.eta;
      row.stderr_eta = r.stderr_eta;
      row.method = r.method;
      row.kind = r.method == Method::monte_carlo ? RowKind::estimate : RowKind::exact;
    } else {
      const double gamma = std::get<GammaBound>(p.dependence).gamma;
      if (!(gamma >= 0.0 && gamma <= 1.0))
        throw InvalidArgument("rank_prospects: gamma_bound must lie in [0,1]");
      const bool valid = check_order(Relation::st, target, p.marginal).holds;
      row.kind = RowKind::lower_bound;
      row.eta_or_bound = valid ? gamma : 0.0;
      row.flagged = !valid;
    }
    table.rows.push_back(std::move(row));
  }

  std::vector<std::size_t> order(prospects.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ra = table.rows[a];
    const auto& rb = table.rows[b];
    if (ra.eta_or_bound != rb.eta_or_bound) return ra.eta_or_bound > rb.eta_or_bound;
    return ra.name < rb.name;
  });
  std::vector<RankingRow> sorted;
  sorted.reserve(order.size());
  for (std::size_t i : order) {
    sorted.push_back(table.rows[i]);
    marginal_of.push_back(&prospects[i].marginal);
  }
  table.rows = std::move(sorted);

  bool value_above = false;
  for (const auto& row : table.rows) {
    if (row.kind != RowKind::lower_bound) {
      value_above = true;
    } else if (value_above) {
      table.warnings.push_back({WarningKind::mixed_comparability,
                                "lower bound for '" + row.name +
                                    "' ranks below an evaluated prospect; its true value may be "
                                    "higher"});
    }
  }
  for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
    if (table.rows[i].kind != RowKind::lower_bound || table.rows[i + 1].kind != RowKind::lower_bound)
      continue;
    const Distribution& a = *marginal_of[i];
    const Distribution& b = *marginal_of[i + 1];
    if (!check_order(Relation::st, a, b).holds && !check_order(Relation::st, b, a).holds)
      table.warnings.push_back({WarningKind::incomparable, "'" + table.rows[i].name + "' and '" +
                                                               table.rows[i + 1].name +
                                                               "' have no common st ordering"});
  }
  return table;
}

}  // namespace sprec
