#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "sprec/copula.hpp"
#include "sprec/dist.hpp"
#include "sprec/errors.hpp"

namespace sprec {

enum class Method { closed_form, discrete_exact, quadrature, monte_carlo };

std::string_view to_string(Method m) noexcept;

/// eta = P(X1 <= X2), xi = P(X1 = X2) for a copula and a pair of marginals.
struct PrecedenceReport {
  double eta = 0.0;
  double xi = 0.0;
  Method method = Method::closed_form;
  double stderr_eta = 0.0;
  double stderr_xi = 0.0;
  std::uint64_t samples = 0;
  std::optional<std::uint64_t> seed;

  /// P(X1 < X2).
  double strict() const noexcept { return eta - xi; }
};

struct EtaXi {
  double eta = 0.0;
  double xi = 0.0;
};

/// eta(C) and xi(C): the values under equal continuous marginals, which do not
/// depend on the marginal chosen. Closed form for every copula node.
EtaXi copula_eta(const Copula& c);

/// Closed-form eta/xi for (c, g1, g2) when a registry entry applies, nullopt
/// otherwise. Equal class-G marginals reduce to copula_eta.
std::optional<EtaXi> eta_exact(const Copula& c, const Distribution& g1, const Distribution& g2);

inline constexpr std::size_t kMinMonteCarloSamples = 10'000;
inline constexpr std::size_t kDefaultSamples = 1'000'000;

/// Monte Carlo estimate from n copula draws pushed through the marginal
/// quantiles. Ties count only when the draw is a structural tie that the
/// marginals map to the same point, when equal class-G marginals see u == v
/// bitwise, or when both values are common atoms.
PrecedenceReport eta_mc(const Copula& c, const Distribution& g1, const Distribution& g2,
                        std::size_t n, std::uint64_t seed, unsigned workers = 1);

/// Integrates the copula density over {G1^-1(u) <= G2^-1(v)} to absolute
/// error `tol`. Requires an absolutely continuous copula (else NoDensity) and
/// class-G marginals (else InvalidArgument).
PrecedenceReport eta_quadrature(const Copula& c, const Distribution& g1, const Distribution& g2,
                                double tol = 1e-9);

inline constexpr std::size_t kMaxDiscreteAtoms = 10'000;

/// Exact eta/xi via rectangle measures when at least one marginal is
/// DiscreteAtoms. Throws SizeLimit beyond kMaxDiscreteAtoms atoms in total.
PrecedenceReport eta_discrete_exact(const Copula& c, const Distribution& g1,
                                    const Distribution& g2);

struct EvaluationOptions {
  std::size_t samples = kDefaultSamples;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  unsigned workers = 1;
};

/// Best available estimate, trying closed form, discrete exact, quadrature
/// and Monte Carlo in that order.
PrecedenceReport eta_best(const Copula& c, const Distribution& g1, const Distribution& g2,
                          const EvaluationOptions& opts = {});

/// Raised when a Monte Carlo estimate sits within 3 standard errors of the
/// level being tested.
class Inconclusive : public Error {
 public:
  Inconclusive(const std::string& what, PrecedenceReport report)
      : Error(what), report_(report) {}
  const PrecedenceReport& report() const noexcept { return report_; }

 private:
  PrecedenceReport report_;
};

struct LevelResult {
  bool holds = false;
  PrecedenceReport report;
};

/// Does X1 stochastically precede X2 at level gamma, i.e. eta >= gamma?
LevelResult sp_level(const Copula& c, const Distribution& g1, const Distribution& g2, double gamma,
                     const EvaluationOptions& opts = {});

struct ClassVerdict {
  double gamma = 0.0;
  bool in_L_gamma = false;
  bool in_B_gamma = false;
  double eta_value = 0.0;
  double tolerance = 0.0;
};

/// L_gamma = {eta(C) >= gamma}, B_gamma = {eta(C) = gamma}, both up to tol.
ClassVerdict classify(const Copula& c, double gamma, double tol = 1e-9);

struct LowerBound {
  double bound = 0.0;
  bool applicable = false;
};

/// eta(C) bounds eta(C,G1,G2) from below whenever G1 <=_st G2.
LowerBound eta_lower_bound(const Copula& c, const Distribution& g1, const Distribution& g2);

}  // namespace sprec
