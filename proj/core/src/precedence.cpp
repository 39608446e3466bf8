#include "sprec/precedence.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "sprec/blocks.hpp"
#include "sprec/normal.hpp"

namespace sprec {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

EtaXi reversed(EtaXi e) { return {1.0 - e.eta + e.xi, e.xi}; }

// eta/xi of uv min{u^-a1, v^-a2} under equal marginals. With (U,V) the
// survival transforms of X1 ~ Exp(1/a1), X2 ~ Exp(1/a2) built from the
// common shock, {U <= V} = {X2 <= (a2/a1) X1}; conditioning on which of the
// three shocks fires first gives the two branches below. On the diagonal
// a1 = a2 the shock ties land on u = v and are counted by eta.
EtaXi mo_survival_eta(double a1, double a2) {
  const double singular = a1 * a2 / (a1 + a2 - a1 * a2);
  const double eta = a1 <= a2 ? 1.0 / (2.0 - a1) : (1.0 - a2) / (2.0 - a2);
  return {eta, a1 == a2 ? singular : 0.0};
}

bool same_rate(double rate, double alpha) { return std::abs(rate * alpha - 1.0) <= 1e-12; }

// Law of -X.
std::optional<Distribution> reflect(const Distribution& g) {
  return std::visit(
      overloaded{[](const Uniform& u) -> std::optional<Distribution> {
                   return Distribution::uniform(-u.b, -u.a);
                 },
                 [](const Normal& n) -> std::optional<Distribution> {
                   return Distribution::normal(-n.mean, n.sd);
                 },
                 [](const DiscreteAtoms& d) -> std::optional<Distribution> {
                   std::vector<Atom> pts(d.points.rbegin(), d.points.rend());
                   for (auto& a : pts) a.x = -a.x;
                   return Distribution::atoms(std::move(pts));
                 },
                 [](const PiecewiseLinearCdf& c) -> std::optional<Distribution> {
                   std::vector<Knot> k(c.knots.rbegin(), c.knots.rend());
                   for (auto& kn : k) {
                     kn.x = -kn.x;
                     kn.p = 1.0 - kn.p;
                   }
                   return Distribution::piecewise_linear(std::move(k));
                 },
                 [](const Exponential&) -> std::optional<Distribution> { return std::nullopt; }},
      g.kind());
}

std::optional<EtaXi> gaussian_pair(double rho, const Distribution& g1, const Distribution& g2) {
  const auto* n1 = std::get_if<Normal>(&g1.kind());
  const auto* n2 = std::get_if<Normal>(&g2.kind());
  if (!n1 || !n2) return std::nullopt;
  const double var = n1->sd * n1->sd + n2->sd * n2->sd - 2.0 * rho * n1->sd * n2->sd;
  return EtaXi{normal_cdf((n2->mean - n1->mean) / std::sqrt(var)), 0.0};
}

double binomial_stderr(double p, std::size_t n) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-7 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::discrete_exact: return "discrete_exact";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "closed_form";
}

EtaXi copula_eta(const Copula& c) {
  return std::visit(
      overloaded{[](const Independence&) { return EtaXi{0.5, 0.0}; },
                 [](const Comonotone&) { return EtaXi{1.0, 1.0}; },
                 [](const Countermonotone&) { return EtaXi{0.5, 0.0}; },
                 [](const Shuffle& s) { return EtaXi{s.gamma, s.gamma == 1.0 ? 1.0 : 0.0}; },
                 [](const Gaussian&) { return EtaXi{0.5, 0.0}; },
                 [](const OrderStatistics&) { return EtaXi{2.0 - std::numbers::pi / 2.0, 0.0}; },
                 [](const MarshallOlkinSurvival& m) { return mo_survival_eta(m.alpha1, m.alpha2); },
                 [](const MarshallOlkinConnecting& m) {
                   return reversed(mo_survival_eta(m.alpha1, m.alpha2));
                 },
                 [](const Mixture& m) {
                   EtaXi total;
                   for (std::size_t i = 0; i < m.components.size(); ++i) {
                     const EtaXi e = copula_eta(m.components[i]);
                     total.eta += m.weights[i] * e.eta;
                     total.xi += m.weights[i] * e.xi;
                   }
                   return total;
                 },
                 [](const Transpose& t) { return reversed(copula_eta(t.inner)); },
                 [](const SurvivalOf& s) { return reversed(copula_eta(s.inner)); }},
      c.node().value);
}

std::optional<EtaXi> eta_exact(const Copula& c, const Distribution& g1, const Distribution& g2) {
  if (g1 == g2 && g1.is_class_g()) return copula_eta(c);
  return std::visit(
      overloaded{
          [&](const Gaussian& g) { return gaussian_pair(g.rho, g1, g2); },
          [&](const Independence&) { return gaussian_pair(0.0, g1, g2); },
          [&](const MarshallOlkinConnecting& m) -> std::optional<EtaXi> {
            const auto* e1 = std::get_if<Exponential>(&g1.kind());
            const auto* e2 = std::get_if<Exponential>(&g2.kind());
            if (!e1 || !e2 || !same_rate(e1->rate, m.alpha1) || !same_rate(e2->rate, m.alpha2))
              return std::nullopt;
            const double denom = m.alpha1 + m.alpha2 - m.alpha1 * m.alpha2;
            return EtaXi{m.alpha2 / denom, m.alpha1 * m.alpha2 / denom};
          },
          [&](const Mixture& m) -> std::optional<EtaXi> {
            EtaXi total;
            for (std::size_t i = 0; i < m.components.size(); ++i) {
              const auto e = eta_exact(m.components[i], g1, g2);
              if (!e) return std::nullopt;
              total.eta += m.weights[i] * e->eta;
              total.xi += m.weights[i] * e->xi;
            }
            return total;
          },
          // (X2, X1) has copula C with marginals (G2, G1).
          [&](const Transpose& t) -> std::optional<EtaXi> {
            const auto e = eta_exact(t.inner, g2, g1);
            if (!e) return std::nullopt;
            return reversed(*e);
          },
          // (-X1, -X2) has copula C with the reflected marginals.
          [&](const SurvivalOf& s) -> std::optional<EtaXi> {
            const auto r1 = reflect(g1);
            const auto r2 = reflect(g2);
            if (!r1 || !r2) return std::nullopt;
            const auto e = eta_exact(s.inner, *r1, *r2);
            if (!e) return std::nullopt;
            return reversed(*e);
          },
          [](const auto&) -> std::optional<EtaXi> { return std::nullopt; }},
      c.node().value);
}

PrecedenceReport eta_mc(const Copula& c, const Distribution& g1, const Distribution& g2,
                        std::size_t n, std::uint64_t seed, unsigned workers) {
  if (n < kMinMonteCarloSamples)
    throw InvalidArgument("eta_mc: need at least " + std::to_string(kMinMonteCarloSamples) +
                          " samples");
  struct Counts {
    std::uint64_t le = 0;
    std::uint64_t ties = 0;
  };
  const bool atoms1 = !g1.has_density();
  const bool atoms2 = !g2.has_density();
  const bool same_g = g1 == g2 && g1.is_class_g();
  const auto blocks = run_blocks(n, seed, workers, [&](Rng& rng, std::size_t, std::size_t count) {
    Counts k;
    for (std::size_t i = 0; i < count; ++i) {
      const CopulaSample s = draw(c, rng);
      const double x1 = g1.quantile(s.u);
      const double x2 = g2.quantile(s.v);
      if (!std::isfinite(x1) || !std::isfinite(x2))
        throw InvalidArgument("eta_mc: non-finite quantile draw");
      bool tie;
      if (s.structural_tie)
        tie = nearly_equal(x1, x2);
      else if (same_g)
        tie = s.u == s.v;
      else
        tie = x1 == x2 && atoms1 && atoms2 && g1.mass_at(x1) > 0.0 && g2.mass_at(x2) > 0.0;
      if (tie || x1 <= x2) ++k.le;
      if (tie) ++k.ties;
    }
    return k;
  });
  Counts total;
  for (const auto& b : blocks) {
    total.le += b.le;
    total.ties += b.ties;
  }
  PrecedenceReport r;
  r.method = Method::monte_carlo;
  r.samples = n;
  r.seed = seed;
  r.eta = static_cast<double>(total.le) / static_cast<double>(n);
  r.xi = static_cast<double>(total.ties) / static_cast<double>(n);
  r.stderr_eta = binomial_stderr(r.eta, n);
  r.stderr_xi = binomial_stderr(r.xi, n);
  return r;
}

PrecedenceReport eta_quadrature(const Copula& c, const Distribution& g1, const Distribution& g2,
                                double tol) {
  if (!has_density(c))
    throw NoDensity("eta_quadrature: copula '" + std::string(c.node_name()) +
                    "' has a singular part; use Monte Carlo");
  if (!g1.is_class_g() || !g2.is_class_g())
    throw InvalidArgument("eta_quadrature: marginals must be continuous and strictly increasing");
  if (!(tol > 0.0)) throw InvalidArgument("eta_quadrature: tol must be > 0");

  // For class-G marginals G1^-1(u) <= G2^-1(v) iff v >= G2(G1^-1(u)), so the
  // inner integral over v is one minus the conditional cdf at that boundary.
  const bool same = g1 == g2;
  auto integrand = [&](double u) {
    const double boundary = same ? u : g2.cdf(g1.quantile(u));
    return 1.0 - conditional_cdf_given_u(c, u, boundary);
  };
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, 1.0, 30, tol, &error);

  PrecedenceReport r;
  r.method = Method::quadrature;
  r.eta = std::clamp(value, 0.0, 1.0);
  r.xi = 0.0;
  r.stderr_eta = error;
  return r;
}

PrecedenceReport eta_discrete_exact(const Copula& c, const Distribution& g1,
                                    const Distribution& g2) {
  if (!g1.is_discrete() && !g2.is_discrete())
    throw InvalidArgument("eta_discrete_exact: at least one marginal must be discrete");
  const auto count = [](const Distribution& g) {
    const auto* d = std::get_if<DiscreteAtoms>(&g.kind());
    return d ? d->points.size() : std::size_t{0};
  };
  if (count(g1) + count(g2) > kMaxDiscreteAtoms)
    throw SizeLimit("eta_discrete_exact: more than " + std::to_string(kMaxDiscreteAtoms) +
                    " atoms");

  double eta = 0.0;
  double xi = 0.0;
  if (const auto* d1 = std::get_if<DiscreteAtoms>(&g1.kind())) {
    // Row sums: atom x of X1 against {X2 >= x}, v in (G2(x-), 1].
    for (const auto& a : d1->points) {
      const double u_lo = g1.cdf_left(a.x);
      const double u_hi = g1.cdf(a.x);
      const double v_lo = g2.cdf_left(a.x);
      eta += rect_measure(c, u_lo, u_hi, v_lo, 1.0);
      const double v_hi = g2.cdf(a.x);
      if (v_hi > v_lo) xi += rect_measure(c, u_lo, u_hi, v_lo, v_hi);
    }
  } else {
    // Column sums: atom y of X2 against {X1 <= y}, u in [0, G1(y)].
    const auto& d2 = std::get<DiscreteAtoms>(g2.kind());
    for (const auto& a : d2.points) {
      const double v_lo = g2.cdf_left(a.x);
      const double v_hi = g2.cdf(a.x);
      eta += rect_measure(c, 0.0, g1.cdf(a.x), v_lo, v_hi);
    }
  }

  PrecedenceReport r;
  r.method = Method::discrete_exact;
  r.eta = std::clamp(eta, 0.0, 1.0);
  r.xi = std::clamp(xi, 0.0, r.eta);
  return r;
}

PrecedenceReport eta_best(const Copula& c, const Distribution& g1, const Distribution& g2,
                          const EvaluationOptions& opts) {
  if (const auto e = eta_exact(c, g1, g2)) {
    PrecedenceReport r;
    r.method = Method::closed_form;
    r.eta = e->eta;
    r.xi = e->xi;
    return r;
  }
  const auto atoms = [](const Distribution& g) {
    const auto* d = std::get_if<DiscreteAtoms>(&g.kind());
    return d ? d->points.size() : std::size_t{0};
  };
  if ((g1.is_discrete() || g2.is_discrete()) && atoms(g1) + atoms(g2) <= kMaxDiscreteAtoms)
    return eta_discrete_exact(c, g1, g2);
  if (has_density(c) && g1.is_class_g() && g2.is_class_g()) return eta_quadrature(c, g1, g2, opts.tol);
  return eta_mc(c, g1, g2, opts.samples, opts.seed, opts.workers);
}

LevelResult sp_level(const Copula& c, const Distribution& g1, const Distribution& g2, double gamma,
                     const EvaluationOptions& opts) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("sp_level: gamma must lie in [0,1]");
  LevelResult result;
  result.report = eta_best(c, g1, g2, opts);
  const auto& r = result.report;
  if (r.method == Method::monte_carlo && std::abs(r.eta - gamma) < 3.0 * r.stderr_eta)
    throw Inconclusive("sp_level: Monte Carlo estimate within 3 standard errors of gamma", r);
  result.holds = r.eta >= gamma;
  return result;
}

ClassVerdict classify(const Copula& c, double gamma, double tol) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("classify: gamma must lie in [0,1]");
  ClassVerdict v;
  v.gamma = gamma;
  v.tolerance = tol;
  v.eta_value = copula_eta(c).eta;
  v.in_L_gamma = v.eta_value >= gamma - tol;
  v.in_B_gamma = std::abs(v.eta_value - gamma) <= tol;
  return v;
}

LowerBound eta_lower_bound(const Copula& c, const Distribution& g1, const Distribution& g2) {
  LowerBound lb;
  lb.applicable = check_order(Relation::st, g1, g2).holds;
  lb.bound = lb.applicable ? copula_eta(c).eta : 0.0;
  return lb;
}

}  // namespace sprec
