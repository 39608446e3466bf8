#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sprec/rng.hpp"

namespace sprec {

struct CopulaNode;

/// Immutable handle to a copula expression tree.
///
/// Leaves are closed-form families; Mixture, Transpose and SurvivalOf wrap
/// other copulas. Copies share the underlying tree.
class Copula {
 public:
  static Copula independence();
  static Copula comonotone();
  static Copula countermonotone();
  /// Cyclic-shift copula C_gamma, gamma in (0,1].
  static Copula shuffle(double gamma);
  /// Gaussian copula, rho in (-1,1).
  static Copula gaussian(double rho);
  /// uv min{u^-a1, v^-a2}, the survival copula of the common-shock model.
  static Copula mo_survival(double alpha1, double alpha2);
  /// Connecting copula of the common-shock model (survival of mo_survival).
  static Copula mo_connecting(double alpha1, double alpha2);
  /// Copula K of (min, max) of two iid continuous variables.
  static Copula order_statistics();

  const CopulaNode& node() const noexcept { return *node_; }
  std::string_view node_name() const noexcept;

  template <class T>
  const T* get_if() const noexcept;

  bool operator==(const Copula& other) const;

 private:
  explicit Copula(std::shared_ptr<const CopulaNode> node) : node_(std::move(node)) {}
  friend Copula make_copula(CopulaNode node);

  std::shared_ptr<const CopulaNode> node_;
};

struct Independence {
  bool operator==(const Independence&) const = default;
};
struct Comonotone {
  bool operator==(const Comonotone&) const = default;
};
struct Countermonotone {
  bool operator==(const Countermonotone&) const = default;
};
struct Shuffle {
  double gamma;
  bool operator==(const Shuffle&) const = default;
};
struct Gaussian {
  double rho;
  bool operator==(const Gaussian&) const = default;
};
struct MarshallOlkinSurvival {
  double alpha1;
  double alpha2;
  bool operator==(const MarshallOlkinSurvival&) const = default;
};
struct MarshallOlkinConnecting {
  double alpha1;
  double alpha2;
  bool operator==(const MarshallOlkinConnecting&) const = default;
};
struct OrderStatistics {
  bool operator==(const OrderStatistics&) const = default;
};
struct Mixture {
  std::vector<Copula> components;
  std::vector<double> weights;
  bool operator==(const Mixture&) const = default;
};
struct Transpose {
  Copula inner;
  bool operator==(const Transpose&) const = default;
};
struct SurvivalOf {
  Copula inner;
  bool operator==(const SurvivalOf&) const = default;
};

struct CopulaNode {
  using Variant = std::variant<Independence, Comonotone, Countermonotone, Shuffle, Gaussian,
                               MarshallOlkinSurvival, MarshallOlkinConnecting, OrderStatistics,
                               Mixture, Transpose, SurvivalOf>;
  Variant value;
  bool operator==(const CopulaNode&) const = default;
};

template <class T>
const T* Copula::get_if() const noexcept {
  return std::get_if<T>(&node_->value);
}

/// C^t(u,v) = C(v,u); transposing a Transpose node unwraps it.
Copula transpose(const Copula& c);
/// Survival copula u+v-1+C(1-u,1-v); applying it twice unwraps.
Copula survival_of(const Copula& c);
/// Convex combination. Throws WeightError unless weights form a simplex
/// (nonnegative, summing to 1 within 1e-12) matching the component count.
Copula mix(std::vector<Copula> components, std::vector<double> weights);

double copula_cdf(const Copula& c, double u, double v);

/// C-measure of (u1,u2] x (v1,v2] by inclusion-exclusion.
double rect_measure(const Copula& c, double u1, double u2, double v1, double v2);

/// Mass of the singular component.
double singular_mass(const Copula& c);

/// True when the copula is absolutely continuous (no singular mass).
bool has_density(const Copula& c);

/// Copula density; throws NoDensity for copulas with a singular part.
double copula_density(const Copula& c, double u, double v);

/// P(V <= v | U = u) = dC/du, the conditional cdf used by quadrature.
/// Throws NoDensity for copulas with a singular part.
double conditional_cdf_given_u(const Copula& c, double u, double v);

enum class Component { AbsolutelyContinuous, Singular };

struct CopulaSample {
  double u = 0.0;
  double v = 0.0;
  Component component = Component::AbsolutelyContinuous;
  /// The generating construction forced the two latent coordinates equal.
  bool structural_tie = false;
};

/// One draw from the copula law.
CopulaSample draw(const Copula& c, Rng& rng);

/// n draws. Samples are produced in fixed-size blocks, each with its own
/// stream derived from `seed`, so the result does not depend on `workers`.
std::vector<CopulaSample> copula_sample(const Copula& c, std::uint64_t seed, std::size_t n,
                                        unsigned workers = 1);

struct ValidationReport {
  /// First few violations, human readable.
  std::vector<std::string> violations;
  std::size_t violation_count = 0;
  bool passed() const noexcept { return violation_count == 0; }
};

inline constexpr double kValidationTolerance = 1e-9;

/// Checks the boundary conditions, 2-increasingness and the Frechet bounds on
/// a (grid+1) x (grid+1) lattice. grid must be >= 8.
ValidationReport validate_copula(const Copula& c, int grid);
ValidationReport validate_copula(const std::function<double(double, double)>& cdf, int grid);

}  // namespace sprec
