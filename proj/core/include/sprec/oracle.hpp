#pragma once

#include <cstdint>
#include <vector>

#include "sprec/copula.hpp"
#include "sprec/dist.hpp"

// Construction-based simulators and a brute-force bracketing integrator.
// Nothing here calls into the precedence estimators, so the two can be
// checked against each other.
namespace sprec::oracle {

/// Y ~ Exp(lambda); X fails at rate 1 while Y survives and at rate beta
/// afterwards. Requires 1 < lambda < beta < 1 + lambda.
struct LoadSharingModel {
  double lambda;
  double beta;

  LoadSharingModel(double lambda, double beta);

  /// P(X > x).
  double survival_x(double x) const;
  /// P(X <= Y) = 1 / (1 + lambda).
  double prob_x_le_y() const { return 1.0 / (1.0 + lambda); }
};

struct Pair {
  double x;
  double y;
};

std::vector<Pair> load_sharing_sample(const LoadSharingModel& model, std::size_t n,
                                      std::uint64_t seed, unsigned workers = 1);

/// T = min(Y1,Y2), X' = max(Y1,Y2), X'' = max(Y3,Y4,Y5) for iid Y_i.
struct Triple {
  double t;
  double x_prime;
  double x_double_prime;
};

std::vector<Triple> order_stats_triple_sample(std::size_t n, std::uint64_t seed,
                                              const Distribution& base = Distribution::uniform(0, 1),
                                              unsigned workers = 1);

/// X1 = min(V,Z), X2 = min(W,Z) with V ~ Exp(1/a1 - 1), W ~ Exp(1/a2 - 1),
/// Z ~ Exp(1). tie marks the draws where the common shock Z came first.
struct ShockDraw {
  double x1;
  double x2;
  bool tie;
};

std::vector<ShockDraw> mo_construction_sample(double alpha1, double alpha2, std::size_t n,
                                              std::uint64_t seed, unsigned workers = 1);

/// Rounding allowance when comparing a value against an EtaBracket.
inline constexpr double kBracketRounding = 1e-12;

struct EtaBracket {
  double low;
  double high;
  bool contains(double eta, double slack = 0.0) const {
    return low - slack <= eta && eta <= high + slack;
  }
};

/// Certified bounds on eta(C,G1,G2) from a grid x grid partition of the unit
/// square: cells wholly inside {G1^-1(u) <= G2^-1(v)} count towards both
/// bounds, straddling cells towards the upper bound only. grid must be >= 16.
EtaBracket grid_eta_oracle(const Copula& c, const Distribution& g1, const Distribution& g2,
                           int grid);

}  // namespace sprec::oracle
