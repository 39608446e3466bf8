#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sprec/precedence.hpp"

namespace {

using namespace sprec;

double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double combined(double a, double b) { return 3.0 * std::hypot(a, b); }

const Distribution kUnit = Distribution::uniform(0, 1);

// Specs with a closed-form eta(C).
std::vector<Copula> closed_form_registry() {
  return {Copula::independence(),
          Copula::comonotone(),
          Copula::countermonotone(),
          Copula::shuffle(0.3),
          Copula::shuffle(1.0),
          Copula::gaussian(0.7),
          Copula::mo_survival(0.4, 0.2),
          Copula::mo_survival(0.2, 0.4),
          Copula::mo_survival(0.3, 0.3),
          Copula::mo_connecting(0.4, 0.2),
          Copula::order_statistics(),
          mix({Copula::shuffle(0.2), Copula::comonotone()}, {0.5, 0.5}),
          transpose(Copula::order_statistics()),
          survival_of(Copula::shuffle(0.6))};
}

TEST(EtaExact, Examples) {
  const auto s = copula_eta(Copula::shuffle(0.3));
  EXPECT_DOUBLE_EQ(s.eta, 0.3);
  EXPECT_EQ(s.xi, 0.0);
  EXPECT_NEAR(copula_eta(Copula::order_statistics()).eta, 0.429204, 1e-6);
  EXPECT_DOUBLE_EQ(copula_eta(Copula::order_statistics()).eta, 2.0 - std::numbers::pi / 2.0);
  const auto g = eta_exact(Copula::gaussian(0.0), Distribution::normal(0, 1), Distribution::normal(1, 1));
  ASSERT_TRUE(g);
  EXPECT_NEAR(g->eta, Phi(1.0 / std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(g->eta, 0.760250, 1e-6);
}

TEST(EtaExact, Registry) {
  EXPECT_EQ(copula_eta(Copula::comonotone()).eta, 1.0);
  EXPECT_EQ(copula_eta(Copula::comonotone()).xi, 1.0);
  EXPECT_EQ(copula_eta(Copula::independence()).eta, 0.5);
  EXPECT_EQ(copula_eta(Copula::countermonotone()).eta, 0.5);
  EXPECT_EQ(copula_eta(Copula::countermonotone()).xi, 0.0);
  for (double rho : {-0.9, -0.5, 0.0, 0.5, 0.9}) EXPECT_EQ(copula_eta(Copula::gaussian(rho)).eta, 0.5);
  EXPECT_EQ(copula_eta(Copula::shuffle(1.0)).eta, 1.0);
}

TEST(EtaExact, GaussianWithNormalMarginals) {
  for (double rho : {-0.8, -0.2, 0.3, 0.95}) {
    const double m1 = 0.4, s1 = 1.3, m2 = -0.1, s2 = 0.6;
    const auto e = eta_exact(Copula::gaussian(rho), Distribution::normal(m1, s1), Distribution::normal(m2, s2));
    ASSERT_TRUE(e);
    EXPECT_NEAR(e->eta, Phi((m2 - m1) / std::sqrt(s1 * s1 + s2 * s2 - 2 * rho * s1 * s2)), 1e-12);
    EXPECT_EQ(e->xi, 0.0);
  }
}

TEST(EtaExact, MarshallOlkinConnectingWithExponentials) {
  const double a1 = 0.4, a2 = 0.2, d = a1 + a2 - a1 * a2;
  const auto e = eta_exact(Copula::mo_connecting(a1, a2), Distribution::exponential(1 / a1),
                           Distribution::exponential(1 / a2));
  ASSERT_TRUE(e);
  EXPECT_NEAR(e->eta, a2 / d, 1e-14);
  EXPECT_NEAR(e->xi, a1 * a2 / d, 1e-14);
  EXPECT_NEAR(e->eta - e->xi, (1 - a1) * a2 / d, 1e-14);
  EXPECT_NEAR(e->eta, 0.384615, 1e-6);
  EXPECT_FALSE(eta_exact(Copula::mo_connecting(a1, a2), Distribution::exponential(1),
                         Distribution::exponential(1 / a2)));
}

TEST(EtaExact, AbsentWithoutRegistryEntry) {
  EXPECT_FALSE(eta_exact(Copula::shuffle(0.3), kUnit, Distribution::normal(0, 1)));
  EXPECT_FALSE(eta_exact(Copula::order_statistics(), kUnit, Distribution::uniform(0.5, 1.5)));
}

// Symmetric copulas satisfy eta = (1 + xi) / 2.
TEST(EtaExact, SymmetricCorollary) {
  for (const auto& c : {Copula::independence(), Copula::gaussian(-0.4), Copula::comonotone(),
                        Copula::countermonotone(), Copula::mo_survival(0.5, 0.5)}) {
    const auto e = copula_eta(c);
    EXPECT_NEAR(e.eta, (1 + e.xi) / 2, 1e-12) << c.node_name();
  }
}

TEST(EtaExact, TransposeAndSurvivalIdentity) {
  for (const auto& c : closed_form_registry()) {
    const auto e = copula_eta(c);
    const double expected = 1 - e.eta + e.xi;
    EXPECT_NEAR(copula_eta(transpose(c)).eta, expected, 1e-10) << c.node_name();
    EXPECT_NEAR(copula_eta(survival_of(c)).eta, expected, 1e-10) << c.node_name();
    EXPECT_NEAR(copula_eta(transpose(c)).xi, e.xi, 1e-12);
    EXPECT_LE(e.xi, e.eta);
  }
}

TEST(EtaExact, TransposeAndSurvivalIdentityWithMarginals) {
  const Copula c = Copula::gaussian(0.4);
  const auto g1 = Distribution::normal(0.3, 1.2), g2 = Distribution::normal(-0.5, 0.7);
  const auto e = eta_exact(c, g1, g2);
  const auto t = eta_exact(transpose(c), g2, g1);
  const auto s = eta_exact(survival_of(c), Distribution::normal(-0.3, 1.2), Distribution::normal(0.5, 0.7));
  ASSERT_TRUE(e && t && s);
  EXPECT_NEAR(t->eta, 1 - e->eta + e->xi, 1e-12);
  EXPECT_NEAR(s->eta, 1 - e->eta + e->xi, 1e-12);
}

TEST(EtaExact, MixtureLinearity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto pool = closed_form_registry();
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int i = 0; i < 50; ++i) {
    const auto& a = pool[pick(rng)];
    const auto& b = pool[pick(rng)];
    const double w = U(rng);
    const auto m = copula_eta(mix({a, b}, {w, 1 - w}));
    EXPECT_NEAR(m.eta, w * copula_eta(a).eta + (1 - w) * copula_eta(b).eta, 1e-10);
    EXPECT_NEAR(m.xi, w * copula_eta(a).xi + (1 - w) * copula_eta(b).xi, 1e-10);
  }
}

TEST(EtaMc, Examples) {
  const auto s = eta_mc(Copula::shuffle(0.5), kUnit, kUnit, 1000000, 1);
  EXPECT_NEAR(s.eta, 0.5, 0.002);
  EXPECT_EQ(s.method, Method::monte_carlo);
  EXPECT_EQ(s.samples, 1000000u);
  EXPECT_EQ(s.seed, 1u);

  const auto m = eta_mc(Copula::mo_connecting(0.4, 0.2), Distribution::exponential(2.5),
                        Distribution::exponential(5), 1000000, 2);
  EXPECT_NEAR(m.eta, 0.384615, 0.002);
  EXPECT_NEAR(m.xi, 0.08 / 0.52, 0.002);
  EXPECT_NEAR(m.strict(), 0.12 / 0.52, 0.002);

  const auto i = eta_mc(Copula::independence(), kUnit, kUnit, 1000000, 3);
  EXPECT_NEAR(i.eta, 0.5, 0.002);
  EXPECT_EQ(i.xi, 0.0);
}

TEST(EtaMc, ShuffleIndicatorIsExact) {
  // u <= gamma always gives x1 < x2, u > gamma never does.
  for (double g : {0.1, 0.3, 0.5, 0.8}) {
    const auto r = eta_mc(Copula::shuffle(g), kUnit, kUnit, 200000, 4);
    EXPECT_NEAR(r.eta, g, 4 * std::sqrt(g * (1 - g) / 200000));
    EXPECT_EQ(r.xi, 0.0);
  }
  const auto one = eta_mc(Copula::shuffle(1.0), kUnit, kUnit, 20000, 4);
  EXPECT_EQ(one.eta, 1.0);
  EXPECT_EQ(one.xi, 1.0);
}

TEST(EtaMc, ComonotoneEqualMarginalsAreAllTies) {
  for (const auto& g : {kUnit, Distribution::exponential(1), Distribution::normal(0, 1)}) {
    const auto r = eta_mc(Copula::comonotone(), g, g, 20000, 5);
    EXPECT_EQ(r.eta, 1.0);
    EXPECT_EQ(r.xi, 1.0);
  }
}

TEST(EtaMc, RejectsSmallSampleCounts) {
  EXPECT_THROW(eta_mc(Copula::independence(), kUnit, kUnit, 9999, 1), InvalidArgument);
}

TEST(EtaMc, WorkerCountDoesNotChangeResult) {
  const Copula c = mix({Copula::gaussian(0.3), Copula::mo_survival(0.3, 0.3)}, {0.5, 0.5});
  const auto a = eta_mc(c, kUnit, Distribution::normal(0.5, 1), 300000, 9, 1);
  const auto b = eta_mc(c, kUnit, Distribution::normal(0.5, 1), 300000, 9, 4);
  EXPECT_EQ(a.eta, b.eta);
  EXPECT_EQ(a.xi, b.xi);
}

TEST(EtaMc, TransposeAndSurvivalIdentity) {
  for (const auto& c : closed_form_registry()) {
    const auto e = eta_mc(c, kUnit, kUnit, 200000, 21);
    const auto t = eta_mc(transpose(c), kUnit, kUnit, 200000, 22);
    const auto s = eta_mc(survival_of(c), kUnit, kUnit, 200000, 23);
    const double expected = 1 - e.eta + e.xi;
    const double se = std::hypot(e.stderr_eta, e.stderr_xi);
    EXPECT_NEAR(t.eta, expected, combined(t.stderr_eta, se)) << c.node_name();
    EXPECT_NEAR(s.eta, expected, combined(s.stderr_eta, se)) << c.node_name();
  }
}

TEST(EtaMc, MarginalInvariance) {
  const std::vector<Distribution> margins = {kUnit, Distribution::exponential(1), Distribution::normal(0, 1)};
  for (const auto& c : closed_form_registry()) {
    std::vector<PrecedenceReport> r;
    for (std::size_t k = 0; k < margins.size(); ++k)
      r.push_back(eta_mc(c, margins[k], margins[k], 200000, 31 + k));
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = i + 1; j < r.size(); ++j)
        EXPECT_NEAR(r[i].eta, r[j].eta, combined(r[i].stderr_eta, r[j].stderr_eta)) << c.node_name();
  }
}

TEST(EtaMc, XiNeverExceedsEta) {
  for (const auto& c : closed_form_registry()) {
    const auto r = eta_mc(c, Distribution::exponential(2), Distribution::exponential(1), 20000, 41);
    EXPECT_LE(r.xi, r.eta);
  }
}

// The piecewise formula for eta of the MO survival form, checked against
// Monte Carlo on both branches and on the diagonal.
TEST(MarshallOlkinSurvival, ClosedFormAgreesWithMonteCarlo) {
  struct Case {
    double a1, a2, eta;
  };
  for (const auto& k : {Case{0.4, 0.2, 0.8 / 1.8}, Case{0.2, 0.4, 1 / 1.8}, Case{0.3, 0.3, 10.0 / 17.0}}) {
    const Copula c = Copula::mo_survival(k.a1, k.a2);
    EXPECT_NEAR(copula_eta(c).eta, k.eta, 1e-14);
    const auto mc = eta_mc(c, kUnit, kUnit, 1000000, 51);
    EXPECT_NEAR(mc.eta, k.eta, 0.002);
    EXPECT_NEAR(mc.xi, copula_eta(c).xi, 0.002);
  }
  EXPECT_NEAR(copula_eta(Copula::mo_survival(0.3, 0.3)).xi, 0.09 / 0.51, 1e-14);
  EXPECT_EQ(copula_eta(Copula::mo_survival(0.4, 0.2)).xi, 0.0);
}

TEST(EtaQuadrature, Examples) {
  const auto k = eta_quadrature(Copula::order_statistics(), kUnit, kUnit, 1e-8);
  EXPECT_NEAR(k.eta, 2.0 - std::numbers::pi / 2.0, 1e-8);
  EXPECT_EQ(k.method, Method::quadrature);
  EXPECT_LE(k.stderr_eta, 1e-8);
  EXPECT_NEAR(eta_quadrature(Copula::gaussian(0.7), kUnit, kUnit, 1e-9).eta, 0.5, 1e-9);
  EXPECT_NEAR(eta_quadrature(Copula::independence(), kUnit, Distribution::uniform(0.5, 1.5), 1e-10).eta,
              7.0 / 8.0, 1e-10);
}

TEST(EtaQuadrature, OrderStatisticsAnyEqualMarginals) {
  for (const auto& g : {Distribution::exponential(3), Distribution::normal(2, 5)})
    EXPECT_NEAR(eta_quadrature(Copula::order_statistics(), g, g, 1e-8).eta, 2.0 - std::numbers::pi / 2.0,
                1e-8);
}

TEST(EtaQuadrature, AgreesWithGaussianClosedForm) {
  for (double rho : {-0.9, -0.3, 0.4, 0.9}) {
    const auto g1 = Distribution::normal(0, 1), g2 = Distribution::normal(0.7, 2);
    const auto q = eta_quadrature(Copula::gaussian(rho), g1, g2, 1e-10);
    EXPECT_NEAR(q.eta, eta_exact(Copula::gaussian(rho), g1, g2)->eta, 1e-9) << rho;
  }
}

TEST(EtaQuadrature, OrderStatisticsWithOwnMarginalsIsOne) {
  // F1(x) = 2x - x^2, F2(x) = x^2 on [0, 1], as piecewise-linear tables.
  std::vector<Knot> k1, k2;
  for (int i = 0; i <= 1024; ++i) {
    const double x = i / 1024.0;
    k1.push_back({x, 2 * x - x * x});
    k2.push_back({x, x * x});
  }
  const auto q = eta_quadrature(Copula::order_statistics(), Distribution::piecewise_linear(k1),
                                Distribution::piecewise_linear(k2), 1e-9);
  EXPECT_NEAR(q.eta, 1.0, 1e-5);
}

TEST(EtaQuadrature, Errors) {
  EXPECT_THROW(eta_quadrature(Copula::shuffle(0.3), kUnit, kUnit), NoDensity);
  EXPECT_THROW(eta_quadrature(Copula::independence(), Distribution::atoms({{0, 1}}), kUnit), InvalidArgument);
}

TEST(EtaDiscreteExact, Examples) {
  const auto zero = Distribution::atoms({{0, 1}});
  const auto a = eta_discrete_exact(Copula::independence(), zero, zero);
  EXPECT_EQ(a.eta, 1.0);
  EXPECT_EQ(a.xi, 1.0);
  EXPECT_EQ(a.method, Method::discrete_exact);

  const auto coin = Distribution::atoms({{0, 0.5}, {1, 0.5}});
  const auto b = eta_discrete_exact(Copula::comonotone(), coin, coin);
  EXPECT_NEAR(b.eta, 1.0, 1e-15);
  EXPECT_NEAR(b.xi, 1.0, 1e-15);

  // u <= 0.3 maps (0, 1); (0.3, 0.5] maps (0, 0); (0.5, 0.8] maps (1, 0);
  // (0.8, 1] maps (1, 1).
  const auto s = eta_discrete_exact(Copula::shuffle(0.3), coin, coin);
  EXPECT_NEAR(s.eta, 0.7, 1e-14);
  EXPECT_NEAR(s.xi, 0.4, 1e-14);
  const auto mc = eta_mc(Copula::shuffle(0.3), coin, coin, 1000000, 61);
  EXPECT_NEAR(mc.eta, s.eta, 3 * mc.stderr_eta);
  EXPECT_NEAR(mc.xi, s.xi, 3 * mc.stderr_xi);
}

// Brute-force double sum over every atom pair.
PrecedenceReport naive_double_sum(const Copula& c, const std::vector<Atom>& a, const std::vector<Atom>& b) {
  PrecedenceReport r;
  double ca = 0.0;
  for (const auto& x : a) {
    double cb = 0.0;
    for (const auto& y : b) {
      const double m = rect_measure(c, ca, ca + x.prob, cb, cb + y.prob);
      if (x.x <= y.x) r.eta += m;
      if (x.x == y.x) r.xi += m;
      cb += y.prob;
    }
    ca += x.prob;
  }
  return r;
}

std::vector<Atom> random_atoms(std::mt19937_64& rng, int k) {
  std::uniform_int_distribution<int> support(-5, 5);
  std::uniform_real_distribution<double> w(0.1, 1.0);
  std::vector<double> xs;
  while (static_cast<int>(xs.size()) < k) {
    const double x = support(rng);
    if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  std::vector<Atom> out;
  double total = 0.0;
  for (double x : xs) {
    out.push_back({x, w(rng)});
    total += out.back().prob;
  }
  for (auto& a : out) a.prob /= total;
  return out;
}

TEST(EtaDiscreteExact, MatchesNaiveDoubleSum) {
  std::mt19937_64 rng(71);
  const auto pool = closed_form_registry();
  for (const auto& c : pool) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto a = random_atoms(rng, 1 + rep * 2), b = random_atoms(rng, 2 + rep);
      const auto fast = eta_discrete_exact(c, Distribution::atoms(a), Distribution::atoms(b));
      const auto slow = naive_double_sum(c, a, b);
      EXPECT_NEAR(fast.eta, slow.eta, 1e-12) << c.node_name();
      EXPECT_NEAR(fast.xi, slow.xi, 1e-12) << c.node_name();
    }
  }
}

TEST(EtaDiscreteExact, OneDiscreteMarginalAgreesWithMonteCarlo) {
  const auto atoms = Distribution::atoms({{-0.5, 0.3}, {0.2, 0.3}, {1.0, 0.4}});
  for (const auto& c : {Copula::gaussian(0.6), Copula::shuffle(0.4), Copula::mo_survival(0.3, 0.5)}) {
    for (bool first : {true, false}) {
      const auto& g1 = first ? atoms : Distribution::normal(0, 1);
      const auto& g2 = first ? Distribution::normal(0, 1) : atoms;
      const auto exact = eta_discrete_exact(c, g1, g2);
      const auto mc = eta_mc(c, g1, g2, 400000, 81);
      EXPECT_NEAR(exact.eta, mc.eta, 3 * mc.stderr_eta + 1e-12) << c.node_name() << first;
      EXPECT_EQ(exact.xi, 0.0);
    }
  }
}

TEST(EtaDiscreteExact, Errors) {
  std::vector<Atom> many;
  for (int i = 0; i < 6000; ++i) many.push_back({static_cast<double>(i), 1.0 / 6000});
  const auto big = Distribution::atoms(many);
  EXPECT_THROW(eta_discrete_exact(Copula::independence(), big, big), SizeLimit);
  EXPECT_THROW(eta_discrete_exact(Copula::independence(), kUnit, kUnit), InvalidArgument);
}

TEST(EtaBest, MethodSelectionOrder) {
  const auto coin = Distribution::atoms({{0, 0.5}, {1, 0.5}});
  EXPECT_EQ(eta_best(Copula::shuffle(0.3), kUnit, kUnit).method, Method::closed_form);
  EXPECT_EQ(eta_best(Copula::shuffle(0.3), coin, coin).method, Method::discrete_exact);
  EXPECT_EQ(eta_best(Copula::order_statistics(), kUnit, Distribution::normal(0, 1)).method, Method::quadrature);
  EvaluationOptions o;
  o.samples = 20000;
  const auto mc = eta_best(Copula::shuffle(0.3), kUnit, Distribution::normal(0, 1), o);
  EXPECT_EQ(mc.method, Method::monte_carlo);
  EXPECT_EQ(mc.samples, 20000u);
}

TEST(SpLevel, Examples) {
  EXPECT_TRUE(sp_level(Copula::shuffle(0.8), kUnit, kUnit, 0.5).holds);
  EXPECT_TRUE(sp_level(Copula::comonotone(), kUnit, kUnit, 1.0).holds);
  const auto n = Distribution::normal(0, 1);
  EXPECT_FALSE(sp_level(Copula::gaussian(0.9), n, n, 0.6).holds);
}

TEST(SpLevel, InconclusiveInsideBand) {
  EvaluationOptions o;
  o.samples = 100000;
  // Closed form is not available for this pair, and eta sits at 1/2 by symmetry.
  const auto n = Distribution::normal(0, 1);
  EXPECT_THROW(sp_level(mix({Copula::shuffle(0.5), Copula::comonotone()}, {0.5, 0.5}), kUnit,
                        Distribution::uniform(0, 1.0 + 1e-3), 0.75, o),
               Inconclusive);
  try {
    sp_level(Copula::shuffle(0.5), n, Distribution::normal(0, 1.0 + 1e-9), 0.5, o);
    FAIL() << "expected Inconclusive";
  } catch (const Inconclusive& e) {
    EXPECT_EQ(e.report().method, Method::monte_carlo);
    EXPECT_EQ(e.report().samples, 100000u);
  }
  EXPECT_TRUE(sp_level(Copula::shuffle(0.5), n, Distribution::normal(0, 1.0 + 1e-9), 0.4, o).holds);
  EXPECT_FALSE(sp_level(Copula::shuffle(0.5), n, Distribution::normal(0, 1.0 + 1e-9), 0.6, o).holds);
}

TEST(SpLevel, ValidatesGamma) {
  EXPECT_THROW(sp_level(Copula::independence(), kUnit, kUnit, 1.5), InvalidArgument);
  EXPECT_THROW(sp_level(Copula::independence(), kUnit, kUnit, -0.1), InvalidArgument);
}

TEST(Classify, Examples) {
  const auto a = classify(Copula::shuffle(0.3), 0.3);
  EXPECT_TRUE(a.in_B_gamma);
  EXPECT_TRUE(a.in_L_gamma);
  EXPECT_FALSE(classify(Copula::shuffle(0.3), 0.5).in_L_gamma);
  const auto c = classify(Copula::independence(), 0.5);
  EXPECT_TRUE(c.in_L_gamma);
  EXPECT_TRUE(c.in_B_gamma);
}

TEST(Classify, VerdictInvariants) {
  for (const auto& c : closed_form_registry()) {
    for (double g = 0.0; g <= 1.0; g += 0.05) {
      const auto v = classify(c, g);
      if (v.in_B_gamma) EXPECT_TRUE(v.in_L_gamma);
      EXPECT_EQ(v.in_L_gamma, v.eta_value >= g - v.tolerance);
    }
  }
}

TEST(EtaLowerBound, Examples) {
  const auto a = eta_lower_bound(Copula::gaussian(0.5), Distribution::normal(0, 1), Distribution::normal(1, 1));
  EXPECT_TRUE(a.applicable);
  EXPECT_EQ(a.bound, 0.5);
  const auto b =
      eta_lower_bound(Copula::shuffle(0.3), Distribution::exponential(1), Distribution::exponential(1));
  EXPECT_TRUE(b.applicable);
  EXPECT_DOUBLE_EQ(b.bound, 0.3);
  const auto c =
      eta_lower_bound(Copula::independence(), Distribution::normal(1, 1), Distribution::normal(0, 1));
  EXPECT_FALSE(c.applicable);
  EXPECT_EQ(c.bound, 0.0);
}

// Random draws shared by the monotonicity and lower-bound properties.
struct Trial {
  Copula copula;
  Distribution lo;
  Distribution hi;
};

Copula random_copula(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.05, 0.95);
  switch (std::uniform_int_distribution<int>(0, 8)(rng)) {
    case 0: return Copula::independence();
    case 1: return Copula::shuffle(U(rng));
    case 2: return Copula::gaussian(2 * U(rng) - 1);
    case 3: return Copula::mo_survival(U(rng), U(rng));
    case 4: return Copula::mo_connecting(U(rng), U(rng));
    case 5: return Copula::order_statistics();
    case 6: return transpose(Copula::order_statistics());
    case 7: return Copula::comonotone();
    default: return mix({Copula::countermonotone(), Copula::shuffle(U(rng))}, {0.5, 0.5});
  }
}

// Sorts and merges coincident points.
Distribution atoms_from(std::vector<Atom> pts) {
  std::sort(pts.begin(), pts.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  std::vector<Atom> merged;
  for (const auto& a : pts) {
    if (!merged.empty() && merged.back().x == a.x)
      merged.back().prob += a.prob;
    else
      merged.push_back(a);
  }
  return Distribution::atoms(merged);
}

// A pair lo <=_st hi, built by a monotone upward push of lo.
std::pair<Distribution, Distribution> random_ordered_pair(std::mt19937_64& rng, bool allow_atoms) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int kind = std::uniform_int_distribution<int>(0, allow_atoms ? 3 : 2)(rng);
  const double shift = 2 * U(rng);
  switch (kind) {
    case 0: {
      const double m = 2 * U(rng) - 1, s = 0.5 + U(rng);
      return {Distribution::normal(m, s), Distribution::normal(m + shift, s)};
    }
    case 1: {
      const double r = 0.5 + 2 * U(rng);
      return {Distribution::exponential(r), Distribution::exponential(r / (1 + shift))};
    }
    case 2: {
      const double a = U(rng), w = 0.5 + U(rng);
      return {Distribution::uniform(a, a + w), Distribution::uniform(a + shift, a + w + 2 * shift)};
    }
    default: {
      std::vector<Atom> lo, hi;
      const int k = std::uniform_int_distribution<int>(1, 6)(rng);
      for (int i = 0; i < k; ++i) {
        const double x = std::floor(6 * U(rng)) - 3;
        const double p = 1.0 / k;
        lo.push_back({x, p});
        hi.push_back({x + std::floor(3 * U(rng)), p});
      }
      return {atoms_from(lo), atoms_from(hi)};
    }
  }
}

TEST(Properties, MonotonicityInSecondMarginal) {
  std::mt19937_64 rng(91);
  EvaluationOptions o;
  o.samples = 100000;
  o.workers = 2;
  int violations = 0;
  for (int t = 0; t < 200; ++t) {
    const Copula c = random_copula(rng);
    const auto [g2, g2p] = random_ordered_pair(rng, true);
    const auto g1 = random_ordered_pair(rng, true).first;
    o.seed = 1000 + t;
    const auto a = eta_best(c, g1, g2, o);
    const auto b = eta_best(c, g1, g2p, o);
    if (a.eta > b.eta + combined(a.stderr_eta, b.stderr_eta) + 1e-9) {
      ++violations;
      ADD_FAILURE() << c.node_name() << ": " << a.eta << " > " << b.eta;
    }
  }
  EXPECT_EQ(violations, 0);
}

TEST(Properties, CopulaEtaIsALowerBound) {
  std::mt19937_64 rng(92);
  EvaluationOptions o;
  o.samples = 100000;
  o.workers = 2;
  int violations = 0;
  for (int t = 0; t < 200; ++t) {
    const Copula c = random_copula(rng);
    const auto [g, h] = random_ordered_pair(rng, true);
    o.seed = 2000 + t;
    const auto r = eta_best(c, g, h, o);
    const double floor = copula_eta(c).eta;
    const auto lb = eta_lower_bound(c, g, h);
    EXPECT_TRUE(lb.applicable);
    if (r.eta < floor - 3 * r.stderr_eta - 1e-9) {
      ++violations;
      ADD_FAILURE() << c.node_name() << ": " << r.eta << " < " << floor;
    }
  }
  EXPECT_EQ(violations, 0);
}

}  // namespace
