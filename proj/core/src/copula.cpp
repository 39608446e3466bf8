#include "sprec/copula.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <sstream>

#include "sprec/blocks.hpp"
#include "sprec/errors.hpp"
#include "sprec/normal.hpp"

namespace sprec {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_alpha(double a1, double a2, const char* who) {
  if (!(a1 > 0.0 && a1 < 1.0 && a2 > 0.0 && a2 < 1.0))
    throw InvalidArgument(std::string(who) + ": alpha1, alpha2 must lie in (0,1)");
}

// ---------------------------------------------------------------------------
// Gaussian copula cdf
//
// C(u,v) = int_{-inf}^{a} phi(z) Phi((b - rho z)/s) dz, a = Phi^-1(u),
// b = Phi^-1(v), s = sqrt(1 - rho^2). The second factor switches from 1 to 0
// around z0 = b/rho over a width s/|rho|, so the range is cut at z0 + k s/|rho|
// and every piece is integrated with 16-point Gauss-Legendre on panels no wider
// than one unit.
// ---------------------------------------------------------------------------

constexpr double kGaussLower = -12.0;  // Phi(-12) < 2e-33

double gaussian_cdf(double rho, double u, double v) {
  if (rho == 0.0) return u * v;
  const double a = normal_quantile(u);
  const double b = normal_quantile(v);
  if (a <= kGaussLower || b == -std::numeric_limits<double>::infinity()) return 0.0;
  const double s = std::sqrt((1.0 - rho) * (1.0 + rho));

  std::vector<double> cuts{kGaussLower, a};
  const double z0 = b / rho;
  const double width = s / std::abs(rho);
  for (int k = -8; k <= 8; ++k) {
    const double c = z0 + k * width;
    if (c > kGaussLower && c < a) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());

  auto f = [&](double z) { return normal_pdf(z) * normal_cdf((b - rho * z) / s); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil(hi - lo)));
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p)
      total += boost::math::quadrature::gauss<double, 16>::integrate(f, lo + p * h, lo + (p + 1) * h);
  }
  return std::clamp(total, 0.0, std::min(u, v));
}

// K(u,v) for the (min, max) pair; w = 1 - sqrt(1-u) is the uniform min at
// level u, and the copula puts no mass below the curve v = w^2.
double order_stats_cdf(double u, double v) {
  const double w = 1.0 - std::sqrt(1.0 - u);
  if (v >= w * w) return 2.0 * w * std::sqrt(v) - w * w;
  return v;
}

double mo_survival_cdf(double a1, double a2, double u, double v) {
  return std::min(std::pow(u, 1.0 - a1) * v, u * std::pow(v, 1.0 - a2));
}

double cdf_impl(const CopulaNode& node, double u, double v);

double cdf_impl(const Copula& c, double u, double v) { return cdf_impl(c.node(), u, v); }

double cdf_impl(const CopulaNode& node, double u, double v) {
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (u >= 1.0) return std::min(v, 1.0);
  if (v >= 1.0) return u;
  return std::visit(
      overloaded{
          [&](const Independence&) { return u * v; },
          [&](const Comonotone&) { return std::min(u, v); },
          [&](const Countermonotone&) { return std::max(u + v - 1.0, 0.0); },
          [&](const Shuffle& s) {
            return std::min({u, v, std::max(u - s.gamma, 0.0) + std::max(v + s.gamma - 1.0, 0.0)});
          },
          [&](const Gaussian& g) { return gaussian_cdf(g.rho, u, v); },
          [&](const MarshallOlkinSurvival& m) { return mo_survival_cdf(m.alpha1, m.alpha2, u, v); },
          [&](const MarshallOlkinConnecting& m) {
            return std::clamp(mo_survival_cdf(m.alpha1, m.alpha2, 1.0 - u, 1.0 - v) + u + v - 1.0,
                              0.0, 1.0);
          },
          [&](const OrderStatistics&) { return order_stats_cdf(u, v); },
          [&](const Mixture& m) {
            double total = 0.0;
            for (std::size_t i = 0; i < m.components.size(); ++i)
              if (m.weights[i] > 0.0) total += m.weights[i] * cdf_impl(m.components[i], u, v);
            return total;
          },
          [&](const Transpose& t) { return cdf_impl(t.inner, v, u); },
          [&](const SurvivalOf& s) {
            return std::clamp(u + v - 1.0 + cdf_impl(s.inner, 1.0 - u, 1.0 - v), 0.0, 1.0);
          }},
      node.value);
}

// dC/du (arg = 0) or dC/dv (arg = 1) for absolutely continuous copulas.
double partial(const Copula& c, int arg, double u, double v) {
  if (arg == 0 && v <= 0.0) return 0.0;
  if (arg == 0 && v >= 1.0) return 1.0;
  if (arg == 1 && u <= 0.0) return 0.0;
  if (arg == 1 && u >= 1.0) return 1.0;
  return std::visit(
      overloaded{
          [&](const Independence&) { return arg == 0 ? v : u; },
          [&](const Gaussian& g) {
            const double s = std::sqrt((1.0 - g.rho) * (1.0 + g.rho));
            const double a = normal_quantile(u);
            const double b = normal_quantile(v);
            return arg == 0 ? normal_cdf((b - g.rho * a) / s) : normal_cdf((a - g.rho * b) / s);
          },
          [&](const OrderStatistics&) {
            const double w = 1.0 - std::sqrt(1.0 - u);
            if (v < w * w) return arg == 0 ? 0.0 : 1.0;
            return arg == 0 ? (std::sqrt(v) - w) / std::sqrt(1.0 - u) : w / std::sqrt(v);
          },
          [&](const Mixture& m) {
            double total = 0.0;
            for (std::size_t i = 0; i < m.components.size(); ++i)
              if (m.weights[i] > 0.0) total += m.weights[i] * partial(m.components[i], arg, u, v);
            return total;
          },
          [&](const Transpose& t) { return partial(t.inner, 1 - arg, v, u); },
          [&](const SurvivalOf& s) { return 1.0 - partial(s.inner, arg, 1.0 - u, 1.0 - v); },
          [&](const auto&) -> double {
            throw NoDensity("copula '" + std::string(c.node_name()) + "' has a singular part");
          }},
      c.node().value);
}

CopulaSample draw_mo(double a1, double a2, bool survival_form, Rng& rng) {
  const double v_shock = rng.exponential(1.0 / a1 - 1.0);
  const double w_shock = rng.exponential(1.0 / a2 - 1.0);
  const double z = rng.exponential(1.0);
  const double x1 = std::min(v_shock, z);
  const double x2 = std::min(w_shock, z);
  const bool tie = z <= std::min(v_shock, w_shock);
  CopulaSample s;
  // X1 ~ Exp(1/a1), X2 ~ Exp(1/a2). The connecting copula is the law of the
  // cdf transforms, the survival copula that of the survival transforms.
  if (survival_form) {
    s.u = std::exp(-x1 / a1);
    s.v = std::exp(-x2 / a2);
  } else {
    s.u = -std::expm1(-x1 / a1);
    s.v = -std::expm1(-x2 / a2);
  }
  s.structural_tie = tie;
  s.component = tie ? Component::Singular : Component::AbsolutelyContinuous;
  return s;
}

}  // namespace

Copula make_copula(CopulaNode node) {
  return Copula(std::make_shared<const CopulaNode>(std::move(node)));
}

Copula Copula::independence() { return make_copula({Independence{}}); }
Copula Copula::comonotone() { return make_copula({Comonotone{}}); }
Copula Copula::countermonotone() { return make_copula({Countermonotone{}}); }

Copula Copula::shuffle(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidArgument("shuffle: gamma must lie in (0,1]");
  return make_copula({Shuffle{gamma}});
}

Copula Copula::gaussian(double rho) {
  if (!(rho > -1.0 && rho < 1.0)) throw InvalidArgument("gaussian: rho must lie in (-1,1)");
  return make_copula({Gaussian{rho}});
}

Copula Copula::mo_survival(double alpha1, double alpha2) {
  check_alpha(alpha1, alpha2, "mo_survival");
  return make_copula({MarshallOlkinSurvival{alpha1, alpha2}});
}

Copula Copula::mo_connecting(double alpha1, double alpha2) {
  check_alpha(alpha1, alpha2, "mo_connecting");
  return make_copula({MarshallOlkinConnecting{alpha1, alpha2}});
}

Copula Copula::order_statistics() { return make_copula({OrderStatistics{}}); }

std::string_view Copula::node_name() const noexcept {
  return std::visit(
      overloaded{[](const Independence&) { return std::string_view{"independence"}; },
                 [](const Comonotone&) { return std::string_view{"comonotone"}; },
                 [](const Countermonotone&) { return std::string_view{"countermonotone"}; },
                 [](const Shuffle&) { return std::string_view{"shuffle"}; },
                 [](const Gaussian&) { return std::string_view{"gaussian"}; },
                 [](const MarshallOlkinSurvival&) { return std::string_view{"mo_survival"}; },
                 [](const MarshallOlkinConnecting&) { return std::string_view{"mo_connecting"}; },
                 [](const OrderStatistics&) { return std::string_view{"order_statistics"}; },
                 [](const Mixture&) { return std::string_view{"mixture"}; },
                 [](const Transpose&) { return std::string_view{"transpose"}; },
                 [](const SurvivalOf&) { return std::string_view{"survival"}; }},
      node_->value);
}

bool Copula::operator==(const Copula& other) const {
  return node_ == other.node_ || *node_ == *other.node_;
}

Copula transpose(const Copula& c) {
  if (const auto* t = c.get_if<Transpose>()) return t->inner;
  return make_copula({Transpose{c}});
}

Copula survival_of(const Copula& c) {
  if (const auto* s = c.get_if<SurvivalOf>()) return s->inner;
  return make_copula({SurvivalOf{c}});
}

Copula mix(std::vector<Copula> components, std::vector<double> weights) {
  if (components.empty()) throw WeightError("mixture: at least one component required");
  if (components.size() != weights.size())
    throw WeightError("mixture: component and weight counts differ");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw WeightError("mixture: weights must be >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw WeightError("mixture: weights must sum to 1");
  return make_copula({Mixture{std::move(components), std::move(weights)}});
}

double copula_cdf(const Copula& c, double u, double v) { return cdf_impl(c, u, v); }

double rect_measure(const Copula& c, double u1, double u2, double v1, double v2) {
  return cdf_impl(c, u2, v2) - cdf_impl(c, u1, v2) - cdf_impl(c, u2, v1) + cdf_impl(c, u1, v1);
}

double singular_mass(const Copula& c) {
  return std::visit(
      overloaded{[](const Independence&) { return 0.0; },
                 [](const Gaussian&) { return 0.0; },
                 // K is absolutely continuous: its density 1/(2 sqrt(v) sqrt(1-u))
                 // above v = (1 - sqrt(1-u))^2 integrates to exactly one (the
                 // inner integral is sqrt(1-u)), so the boundary curve carries
                 // no mass. The unit tests re-derive this by quadrature.
                 [](const OrderStatistics&) { return 0.0; },
                 [](const Comonotone&) { return 1.0; },
                 [](const Countermonotone&) { return 1.0; },
                 [](const Shuffle&) { return 1.0; },
                 [](const MarshallOlkinSurvival& m) {
                   return m.alpha1 * m.alpha2 / (m.alpha1 + m.alpha2 - m.alpha1 * m.alpha2);
                 },
                 [](const MarshallOlkinConnecting& m) {
                   return m.alpha1 * m.alpha2 / (m.alpha1 + m.alpha2 - m.alpha1 * m.alpha2);
                 },
                 [](const Mixture& m) {
                   double total = 0.0;
                   for (std::size_t i = 0; i < m.components.size(); ++i)
                     total += m.weights[i] * singular_mass(m.components[i]);
                   return total;
                 },
                 [](const Transpose& t) { return singular_mass(t.inner); },
                 [](const SurvivalOf& s) { return singular_mass(s.inner); }},
      c.node().value);
}

bool has_density(const Copula& c) {
  return std::visit(overloaded{[](const Independence&) { return true; },
                               [](const Gaussian&) { return true; },
                               [](const OrderStatistics&) { return true; },
                               [](const Mixture& m) {
                                 for (std::size_t i = 0; i < m.components.size(); ++i)
                                   if (m.weights[i] > 0.0 && !has_density(m.components[i]))
                                     return false;
                                 return true;
                               },
                               [](const Transpose& t) { return has_density(t.inner); },
                               [](const SurvivalOf& s) { return has_density(s.inner); },
                               [](const auto&) { return false; }},
                    c.node().value);
}

double copula_density(const Copula& c, double u, double v) {
  return std::visit(
      overloaded{
          [](const Independence&) { return 1.0; },
          [&](const Gaussian& g) {
            const double a = normal_quantile(u);
            const double b = normal_quantile(v);
            const double s2 = (1.0 - g.rho) * (1.0 + g.rho);
            const double q = g.rho * g.rho * (a * a + b * b) - 2.0 * g.rho * a * b;
            return std::exp(-q / (2.0 * s2)) / std::sqrt(s2);
          },
          [&](const OrderStatistics&) {
            const double w = 1.0 - std::sqrt(1.0 - u);
            return v >= w * w ? 0.5 / (std::sqrt(v) * std::sqrt(1.0 - u)) : 0.0;
          },
          [&](const Mixture& m) {
            double total = 0.0;
            for (std::size_t i = 0; i < m.components.size(); ++i)
              if (m.weights[i] > 0.0) total += m.weights[i] * copula_density(m.components[i], u, v);
            return total;
          },
          [&](const Transpose& t) { return copula_density(t.inner, v, u); },
          [&](const SurvivalOf& s) { return copula_density(s.inner, 1.0 - u, 1.0 - v); },
          [&](const auto&) -> double {
            throw NoDensity("copula '" + std::string(c.node_name()) + "' has a singular part");
          }},
      c.node().value);
}

double conditional_cdf_given_u(const Copula& c, double u, double v) { return partial(c, 0, u, v); }

CopulaSample draw(const Copula& c, Rng& rng) {
  return std::visit(
      overloaded{
          [&](const Independence&) {
            const double u = rng.uniform();
            return CopulaSample{u, rng.uniform(), Component::AbsolutelyContinuous, false};
          },
          [&](const Comonotone&) {
            const double u = rng.uniform();
            return CopulaSample{u, u, Component::Singular, true};
          },
          [&](const Countermonotone&) {
            const double u = rng.uniform();
            return CopulaSample{u, 1.0 - u, Component::Singular, false};
          },
          [&](const Shuffle& s) {
            const double u = rng.uniform();
            const double v = u <= s.gamma ? u + (1.0 - s.gamma) : u - s.gamma;
            // gamma = 1 degenerates to the diagonal (v == u bitwise).
            return CopulaSample{u, v, Component::Singular, s.gamma == 1.0};
          },
          [&](const Gaussian& g) {
            const double u = rng.uniform();
            const double z = g.rho * normal_quantile(u) +
                             std::sqrt((1.0 - g.rho) * (1.0 + g.rho)) * normal_quantile(rng.uniform());
            return CopulaSample{u, normal_cdf(z), Component::AbsolutelyContinuous, false};
          },
          [&](const MarshallOlkinSurvival& m) { return draw_mo(m.alpha1, m.alpha2, true, rng); },
          [&](const MarshallOlkinConnecting& m) { return draw_mo(m.alpha1, m.alpha2, false, rng); },
          [&](const OrderStatistics&) {
            const double a = rng.uniform();
            const double b = rng.uniform();
            const double lo = std::min(a, b);
            const double hi = std::max(a, b);
            return CopulaSample{lo * (2.0 - lo), hi * hi, Component::AbsolutelyContinuous, false};
          },
          [&](const Mixture& m) {
            const double pick = rng.uniform();
            double run = 0.0;
            std::size_t chosen = m.components.size() - 1;
            for (std::size_t i = 0; i < m.weights.size(); ++i) {
              run += m.weights[i];
              if (pick < run && m.weights[i] > 0.0) {
                chosen = i;
                break;
              }
            }
            return draw(m.components[chosen], rng);
          },
          [&](const Transpose& t) {
            CopulaSample s = draw(t.inner, rng);
            std::swap(s.u, s.v);
            return s;
          },
          [&](const SurvivalOf& sv) {
            CopulaSample s = draw(sv.inner, rng);
            s.u = 1.0 - s.u;
            s.v = 1.0 - s.v;
            return s;
          }},
      c.node().value);
}

std::vector<CopulaSample> copula_sample(const Copula& c, std::uint64_t seed, std::size_t n,
                                        unsigned workers) {
  if (n == 0) throw InvalidArgument("copula_sample: n must be >= 1");
  std::vector<CopulaSample> out(n);
  run_blocks(n, seed, workers, [&](Rng& rng, std::size_t begin, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) out[begin + i] = draw(c, rng);
    return 0;
  });
  return out;
}

ValidationReport validate_copula(const Copula& c, int grid) {
  return validate_copula([&c](double u, double v) { return copula_cdf(c, u, v); }, grid);
}

ValidationReport validate_copula(const std::function<double(double, double)>& cdf, int grid) {
  if (grid < 8) throw InvalidArgument("validate_copula: grid must be >= 8");
  constexpr std::size_t kKeep = 16;
  const double tol = kValidationTolerance;
  const auto g = static_cast<std::size_t>(grid);
  ValidationReport report;
  auto flag = [&](const std::string& what, double u, double v, double value) {
    ++report.violation_count;
    if (report.violations.size() < kKeep) {
      std::ostringstream os;
      os << what << " at (" << u << ", " << v << "): " << value;
      report.violations.push_back(os.str());
    }
  };

  std::vector<double> lattice((g + 1) * (g + 1));
  auto at = [&](std::size_t i, std::size_t j) -> double& { return lattice[i * (g + 1) + j]; };
  for (std::size_t i = 0; i <= g; ++i)
    for (std::size_t j = 0; j <= g; ++j)
      at(i, j) = cdf(static_cast<double>(i) / grid, static_cast<double>(j) / grid);

  for (std::size_t i = 0; i <= g; ++i) {
    const double t = static_cast<double>(i) / grid;
    if (std::abs(at(i, 0)) > tol) flag("C(u,0) != 0", t, 0.0, at(i, 0));
    if (std::abs(at(0, i)) > tol) flag("C(0,v) != 0", 0.0, t, at(0, i));
    if (std::abs(at(i, g) - t) > tol) flag("C(u,1) != u", t, 1.0, at(i, g));
    if (std::abs(at(g, i) - t) > tol) flag("C(1,v) != v", 1.0, t, at(g, i));
  }
  for (std::size_t i = 0; i <= g; ++i) {
    for (std::size_t j = 0; j <= g; ++j) {
      const double u = static_cast<double>(i) / grid;
      const double v = static_cast<double>(j) / grid;
      const double value = at(i, j);
      if (value < std::max(u + v - 1.0, 0.0) - tol) flag("below lower Frechet bound", u, v, value);
      if (value > std::min(u, v) + tol) flag("above upper Frechet bound", u, v, value);
      if (i < g && j < g) {
        const double mass = at(i + 1, j + 1) - at(i, j + 1) - at(i + 1, j) + at(i, j);
        if (mass < -tol) flag("negative rectangle measure", u, v, mass);
      }
    }
  }
  return report;
}

}  // namespace sprec
