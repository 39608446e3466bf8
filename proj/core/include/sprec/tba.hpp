#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sprec/copula.hpp"
#include "sprec/dist.hpp"
#include "sprec/precedence.hpp"

namespace sprec {

/// Only L_gamma membership of the connecting copula with the target is known.
struct GammaBound {
  double gamma;
};

struct Prospect {
  std::string name;
  Distribution marginal;
  /// Copula of (T, X), or a lower bound on its eta.
  std::variant<Copula, GammaBound> dependence;
};

enum class RowKind { exact, estimate, lower_bound };

std::string_view to_string(RowKind k) noexcept;

struct RankingRow {
  std::string name;
  /// P(T <= X), or a lower bound on it for lower_bound rows.
  double eta_or_bound = 0.0;
  RowKind kind = RowKind::exact;
  double stderr_eta = 0.0;
  /// Evaluation method for copula rows.
  std::optional<Method> method;
  /// Lower-bound row whose marginal does not st-dominate the target; the
  /// bound then degrades to 0.
  bool flagged = false;
};

enum class WarningKind { mixed_comparability, incomparable };

std::string_view to_string(WarningKind k) noexcept;

struct RankingWarning {
  WarningKind kind;
  std::string message;
};

/// Rows sorted by eta_or_bound descending, ties by name.
struct RankingTable {
  std::vector<RankingRow> rows;
  std::vector<RankingWarning> warnings;
};

/// Ranks prospects by P(T <= X). Copula prospects use the best available
/// estimator with a per-row seed derived from opts.seed; bound prospects
/// contribute gamma when G_T <=_st G_X and 0 otherwise.
///
/// Warnings are reported, never thrown: mixed_comparability when a bound row
/// sits below an exact or estimated row (the true value could be higher),
/// incomparable when two adjacent bound rows have marginals that are not
/// st-ordered either way.
RankingTable rank_prospects(const Distribution& target, const std::vector<Prospect>& prospects,
                            const EvaluationOptions& opts = {});

}  // namespace sprec
