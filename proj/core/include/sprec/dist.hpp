#pragma once

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace sprec {

struct Uniform {
  double a = 0.0;
  double b = 1.0;
  bool operator==(const Uniform&) const = default;
};

struct Exponential {
  double rate = 1.0;
  bool operator==(const Exponential&) const = default;
};

struct Normal {
  double mean = 0.0;
  double sd = 1.0;
  bool operator==(const Normal&) const = default;
};

struct Atom {
  double x = 0.0;
  double prob = 0.0;
  bool operator==(const Atom&) const = default;
};

/// Finite discrete law. Points strictly increasing, masses summing to one.
struct DiscreteAtoms {
  std::vector<Atom> points;
  bool operator==(const DiscreteAtoms&) const = default;
};

struct Knot {
  double x = 0.0;
  double p = 0.0;
  bool operator==(const Knot&) const = default;
};

/// Cdf interpolated linearly between knots. Two knots sharing an x encode a
/// jump; two consecutive knots sharing a p encode a flat stretch.
struct PiecewiseLinearCdf {
  std::vector<Knot> knots;
  bool operator==(const PiecewiseLinearCdf&) const = default;
};

/// An immutable univariate distribution function.
///
/// All members are pure, so a Distribution may be shared freely between
/// threads. Construction validates the parameters and throws
/// sprec::InvalidArgument on bad input.
class Distribution {
 public:
  using Kind = std::variant<Uniform, Exponential, Normal, DiscreteAtoms, PiecewiseLinearCdf>;

  explicit Distribution(Kind kind);

  static Distribution uniform(double a, double b) { return Distribution{Uniform{a, b}}; }
  static Distribution exponential(double rate) { return Distribution{Exponential{rate}}; }
  static Distribution normal(double mean, double sd) { return Distribution{Normal{mean, sd}}; }
  static Distribution atoms(std::vector<Atom> points) {
    return Distribution{DiscreteAtoms{std::move(points)}};
  }
  static Distribution piecewise_linear(std::vector<Knot> knots) {
    return Distribution{PiecewiseLinearCdf{std::move(knots)}};
  }

  const Kind& kind() const noexcept { return kind_; }
  std::string_view kind_name() const noexcept;

  /// G(x), right-continuous.
  double cdf(double x) const noexcept;
  /// G(x-) = P(X < x).
  double cdf_left(double x) const noexcept;
  /// P(X > x).
  double survival(double x) const noexcept;
  /// Mass of the atom at x (zero for continuous points).
  double mass_at(double x) const noexcept { return cdf(x) - cdf_left(x); }

  /// Generalized inverse inf{x : G(x) >= p}. For p = 0 / p = 1 returns the
  /// infimum / supremum of the support, which may be -inf / +inf.
  /// Throws InvalidArgument on NaN or p outside [0,1].
  double quantile(double p) const;

  /// Continuous and strictly increasing where 0 < G < 1.
  bool is_class_g() const noexcept;
  bool is_discrete() const noexcept { return std::holds_alternative<DiscreteAtoms>(kind_); }
  /// True when a Lebesgue density exists (no atoms).
  bool has_density() const noexcept;

  /// log of the density; -inf off the support. Requires has_density().
  double log_density(double x) const;
  double log_survival(double x) const noexcept;

  double support_min() const noexcept;
  double support_max() const noexcept;

  /// Atom locations, knot abscissae and finite support endpoints, sorted and
  /// unique.
  std::vector<double> breakpoints() const;

  bool operator==(const Distribution& other) const { return kind_ == other.kind_; }

 private:
  Kind kind_;
  std::vector<double> cumulative_;  // running totals for DiscreteAtoms
};

enum class Relation { st, hr, lr };

std::string_view to_string(Relation r) noexcept;
Relation relation_from_string(std::string_view name);

struct OrderCheckResult {
  Relation relation = Relation::st;
  bool holds = true;
  /// A point where the defining inequality fails. For hr/lr the failure is
  /// between `witness` and `witness_upper`: the ratio at witness_upper is
  /// below the ratio at witness.
  std::optional<double> witness;
  std::optional<double> witness_upper;
  int grid_size = 0;
};

/// Minimum grid accepted by check_order.
inline constexpr int kMinOrderGrid = 64;
/// Pointwise tolerance on cdf differences in the st check.
inline constexpr double kOrderTolerance = 1e-12;

/// Checks g1 <=_rel g2. Same-family exponential and normal pairs use the
/// analytic criterion; everything else is checked on `grid` quantile-spaced
/// points of the mixture (g1+g2)/2 plus every breakpoint.
OrderCheckResult check_order(Relation relation, const Distribution& g1, const Distribution& g2,
                             int grid = 512);

/// Distribution whose cdf is min{G(x), H(x)}: exact when one argument
/// dominates or both are discrete, otherwise a piecewise-linear cdf that
/// matches the minimum on its knots. Knots include 1024 quantiles of each
/// argument, so between knots the error is below 1/1024.
Distribution pointwise_min_cdf(const Distribution& g, const Distribution& h);

/// Quantile of the equal-weight mixture (G1+G2)/2.
double mixture_quantile(const Distribution& g1, const Distribution& g2, double p);

}  // namespace sprec
