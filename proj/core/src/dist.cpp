#include "sprec/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sprec/errors.hpp"
#include "sprec/normal.hpp"

namespace sprec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

void validate(const Uniform& u) {
  require(std::isfinite(u.a) && std::isfinite(u.b) && u.a < u.b, "uniform: need finite a < b");
}

void validate(const Exponential& e) {
  require(std::isfinite(e.rate) && e.rate > 0.0, "exponential: rate must be finite and > 0");
}

void validate(const Normal& n) {
  require(std::isfinite(n.mean) && std::isfinite(n.sd) && n.sd > 0.0,
          "normal: need finite mean and sd > 0");
}

void validate(const DiscreteAtoms& d) {
  require(!d.points.empty(), "atoms: at least one point required");
  double total = 0.0;
  for (std::size_t i = 0; i < d.points.size(); ++i) {
    const auto& a = d.points[i];
    require(std::isfinite(a.x), "atoms: points must be finite");
    require(a.prob > 0.0 && a.prob <= 1.0, "atoms: probabilities must lie in (0,1]");
    if (i > 0) require(d.points[i - 1].x < a.x, "atoms: points must be strictly increasing");
    total += a.prob;
  }
  require(std::abs(total - 1.0) <= 1e-12, "atoms: probabilities must sum to 1");
}

void validate(const PiecewiseLinearCdf& c) {
  const auto& k = c.knots;
  require(k.size() >= 2, "pwl: at least two knots required");
  for (std::size_t i = 0; i < k.size(); ++i) {
    require(std::isfinite(k[i].x), "pwl: knots must be finite");
    require(k[i].p >= 0.0 && k[i].p <= 1.0, "pwl: knot probabilities must lie in [0,1]");
    if (i > 0) {
      require(k[i - 1].x <= k[i].x, "pwl: knot abscissae must be nondecreasing");
      require(k[i - 1].p <= k[i].p, "pwl: knot probabilities must be nondecreasing");
    }
  }
  require(k.front().p == 0.0, "pwl: first knot must have p = 0");
  require(k.back().p == 1.0, "pwl: last knot must have p = 1");
}

double pwl_cdf(const std::vector<Knot>& k, double x) {
  auto it = std::upper_bound(k.begin(), k.end(), x,
                             [](double value, const Knot& kn) { return value < kn.x; });
  if (it == k.begin()) return 0.0;
  if (it == k.end()) return 1.0;
  const Knot& lo = *(it - 1);
  const Knot& hi = *it;
  return lo.p + (x - lo.x) / (hi.x - lo.x) * (hi.p - lo.p);
}

double pwl_cdf_left(const std::vector<Knot>& k, double x) {
  auto it = std::lower_bound(k.begin(), k.end(), x,
                             [](const Knot& kn, double value) { return kn.x < value; });
  if (it == k.begin()) return 0.0;
  if (it == k.end()) return 1.0;
  const Knot& lo = *(it - 1);
  const Knot& hi = *it;
  return lo.p + (x - lo.x) / (hi.x - lo.x) * (hi.p - lo.p);
}

double pwl_quantile(const std::vector<Knot>& k, double p) {
  auto it = std::lower_bound(k.begin(), k.end(), p,
                             [](const Knot& kn, double value) { return kn.p < value; });
  if (it == k.begin()) return it->x;
  if (it == k.end()) return k.back().x;
  const Knot& lo = *(it - 1);
  const Knot& hi = *it;
  if (lo.x == hi.x) return hi.x;
  return lo.x + (p - lo.p) / (hi.p - lo.p) * (hi.x - lo.x);
}

bool pwl_has_jump(const std::vector<Knot>& k) {
  for (std::size_t i = 1; i < k.size(); ++i)
    if (k[i - 1].x == k[i].x && k[i - 1].p < k[i].p) return true;
  return false;
}

}  // namespace

Distribution::Distribution(Kind kind) : kind_(std::move(kind)) {
  std::visit([](const auto& k) { validate(k); }, kind_);
  if (const auto* d = std::get_if<DiscreteAtoms>(&kind_)) {
    cumulative_.reserve(d->points.size());
    double run = 0.0;
    for (const auto& a : d->points) cumulative_.push_back(run += a.prob);
    cumulative_.back() = 1.0;
  }
}

std::string_view Distribution::kind_name() const noexcept {
  return std::visit(overloaded{[](const Uniform&) { return std::string_view{"uniform"}; },
                               [](const Exponential&) { return std::string_view{"exponential"}; },
                               [](const Normal&) { return std::string_view{"normal"}; },
                               [](const DiscreteAtoms&) { return std::string_view{"atoms"}; },
                               [](const PiecewiseLinearCdf&) { return std::string_view{"pwl"}; }},
                    kind_);
}

double Distribution::cdf(double x) const noexcept {
  return std::visit(
      overloaded{
          [x](const Uniform& u) { return std::clamp((x - u.a) / (u.b - u.a), 0.0, 1.0); },
          [x](const Exponential& e) { return x <= 0.0 ? 0.0 : -std::expm1(-e.rate * x); },
          [x](const Normal& n) { return normal_cdf((x - n.mean) / n.sd); },
          [this, x](const DiscreteAtoms& d) {
            auto it = std::upper_bound(d.points.begin(), d.points.end(), x,
                                       [](double v, const Atom& a) { return v < a.x; });
            const auto k = static_cast<std::size_t>(it - d.points.begin());
            return k == 0 ? 0.0 : cumulative_[k - 1];
          },
          [x](const PiecewiseLinearCdf& c) { return pwl_cdf(c.knots, x); }},
      kind_);
}

double Distribution::cdf_left(double x) const noexcept {
  return std::visit(overloaded{[this, x](const DiscreteAtoms& d) {
                                 auto it = std::lower_bound(
                                     d.points.begin(), d.points.end(), x,
                                     [](const Atom& a, double v) { return a.x < v; });
                                 const auto k = static_cast<std::size_t>(it - d.points.begin());
                                 return k == 0 ? 0.0 : cumulative_[k - 1];
                               },
                               [x](const PiecewiseLinearCdf& c) { return pwl_cdf_left(c.knots, x); },
                               [this, x](const auto&) { return cdf(x); }},
                    kind_);
}

double Distribution::survival(double x) const noexcept {
  return std::visit(
      overloaded{[x](const Exponential& e) { return x <= 0.0 ? 1.0 : std::exp(-e.rate * x); },
                 [x](const Normal& n) { return normal_ccdf((x - n.mean) / n.sd); },
                 [this, x](const auto&) { return 1.0 - cdf(x); }},
      kind_);
}

double Distribution::quantile(double p) const {
  if (std::isnan(p) || p < 0.0 || p > 1.0)
    throw InvalidArgument("quantile: p must lie in [0,1], got " + std::to_string(p));
  if (p == 0.0) return support_min();
  if (p == 1.0) return support_max();
  return std::visit(
      overloaded{[p](const Uniform& u) { return u.a + p * (u.b - u.a); },
                 [p](const Exponential& e) { return -std::log1p(-p) / e.rate; },
                 [p](const Normal& n) { return n.mean + n.sd * normal_quantile(p); },
                 [this, p](const DiscreteAtoms& d) {
                   auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), p);
                   return d.points[static_cast<std::size_t>(it - cumulative_.begin())].x;
                 },
                 [p](const PiecewiseLinearCdf& c) { return pwl_quantile(c.knots, p); }},
      kind_);
}

bool Distribution::is_class_g() const noexcept {
  return std::visit(overloaded{[](const DiscreteAtoms&) { return false; },
                               [](const PiecewiseLinearCdf& c) {
                                 const auto& k = c.knots;
                                 if (pwl_has_jump(k)) return false;
                                 for (std::size_t i = 1; i < k.size(); ++i) {
                                   const bool flat = k[i - 1].p == k[i].p && k[i - 1].x < k[i].x;
                                   if (flat && k[i].p > 0.0 && k[i].p < 1.0) return false;
                                 }
                                 return true;
                               },
                               [](const auto&) { return true; }},
                    kind_);
}

bool Distribution::has_density() const noexcept {
  return std::visit(overloaded{[](const DiscreteAtoms&) { return false; },
                               [](const PiecewiseLinearCdf& c) { return !pwl_has_jump(c.knots); },
                               [](const auto&) { return true; }},
                    kind_);
}

double Distribution::log_density(double x) const {
  if (!has_density()) throw UnsupportedOrder("log_density: distribution has atoms");
  return std::visit(
      overloaded{
          [x](const Uniform& u) { return (x < u.a || x > u.b) ? -kInf : -std::log(u.b - u.a); },
          [x](const Exponential& e) { return x < 0.0 ? -kInf : std::log(e.rate) - e.rate * x; },
          [x](const Normal& n) { return normal_log_pdf((x - n.mean) / n.sd) - std::log(n.sd); },
          [](const DiscreteAtoms&) { return -kInf; },
          [x](const PiecewiseLinearCdf& c) {
            const auto& k = c.knots;
            auto it = std::upper_bound(k.begin(), k.end(), x,
                                       [](double v, const Knot& kn) { return v < kn.x; });
            if (it == k.begin() || it == k.end()) return -kInf;
            const Knot& lo = *(it - 1);
            const Knot& hi = *it;
            return std::log((hi.p - lo.p) / (hi.x - lo.x));
          }},
      kind_);
}

double Distribution::log_survival(double x) const noexcept {
  return std::visit(
      overloaded{[x](const Exponential& e) { return x <= 0.0 ? 0.0 : -e.rate * x; },
                 [x](const Normal& n) { return normal_log_ccdf((x - n.mean) / n.sd); },
                 [this, x](const auto&) { return std::log(1.0 - cdf(x)); }},
      kind_);
}

double Distribution::support_min() const noexcept {
  return std::visit(overloaded{[](const Uniform& u) { return u.a; },
                               [](const Exponential&) { return 0.0; },
                               [](const Normal&) { return -kInf; },
                               [](const DiscreteAtoms& d) { return d.points.front().x; },
                               [](const PiecewiseLinearCdf& c) {
                                 double x = c.knots.front().x;
                                 for (const auto& k : c.knots) {
                                   if (k.p > 0.0) break;
                                   x = k.x;
                                 }
                                 return x;
                               }},
                    kind_);
}

double Distribution::support_max() const noexcept {
  return std::visit(overloaded{[](const Uniform& u) { return u.b; },
                               [](const Exponential&) { return kInf; },
                               [](const Normal&) { return kInf; },
                               [](const DiscreteAtoms& d) { return d.points.back().x; },
                               [](const PiecewiseLinearCdf& c) {
                                 for (const auto& k : c.knots)
                                   if (k.p >= 1.0) return k.x;
                                 return c.knots.back().x;
                               }},
                    kind_);
}

std::vector<double> Distribution::breakpoints() const {
  std::vector<double> out = std::visit(
      overloaded{[](const Uniform& u) { return std::vector<double>{u.a, u.b}; },
                 [](const Exponential&) { return std::vector<double>{0.0}; },
                 [](const Normal&) { return std::vector<double>{}; },
                 [](const DiscreteAtoms& d) {
                   std::vector<double> xs;
                   for (const auto& a : d.points) xs.push_back(a.x);
                   return xs;
                 },
                 [](const PiecewiseLinearCdf& c) {
                   std::vector<double> xs;
                   for (const auto& k : c.knots) xs.push_back(k.x);
                   return xs;
                 }},
      kind_);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string_view to_string(Relation r) noexcept {
  switch (r) {
    case Relation::st: return "st";
    case Relation::hr: return "hr";
    case Relation::lr: return "lr";
  }
  return "st";
}

Relation relation_from_string(std::string_view name) {
  if (name == "st") return Relation::st;
  if (name == "hr") return Relation::hr;
  if (name == "lr") return Relation::lr;
  throw InvalidArgument("unknown order relation '" + std::string(name) + "'");
}

double mixture_quantile(const Distribution& g1, const Distribution& g2, double p) {
  const double q1 = g1.quantile(p);
  const double q2 = g2.quantile(p);
  double lo = std::min(q1, q2);
  double hi = std::max(q1, q2);
  if (lo == hi) return lo;
  auto mix = [&](double x) { return 0.5 * (g1.cdf(x) + g2.cdf(x)); };
  // Invariant: mix(lo) < p <= mix(hi), or lo is already the answer.
  if (mix(lo) >= p) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (mix(mid) >= p)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

namespace {

struct ScanOutcome {
  std::optional<double> witness;
  std::optional<double> witness_upper;
};

std::vector<double> order_grid(const Distribution& g1, const Distribution& g2, int grid) {
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(grid) + 16);
  for (int i = 0; i < grid; ++i) pts.push_back(mixture_quantile(g1, g2, (i + 0.5) / grid));
  // Far tails, where one support may end before the other.
  for (double p : {1e-9, 1e-6, 1.0 - 1e-6, 1.0 - 1e-9}) pts.push_back(mixture_quantile(g1, g2, p));
  // Breakpoints and their immediate neighbours, so a density or survival
  // function dropping to zero at a support end is seen from both sides.
  for (const auto* g : {&g1, &g2}) {
    for (double b : g->breakpoints()) {
      const double d = 1e-9 * std::max(1.0, std::abs(b));
      pts.push_back(b - d);
      pts.push_back(b);
      pts.push_back(b + d);
    }
  }

  // Normal pairs with unequal scales: add the cdf crossing and the
  // density-ratio vertex, where violations concentrate.
  const auto* n1 = std::get_if<Normal>(&g1.kind());
  const auto* n2 = std::get_if<Normal>(&g2.kind());
  if (n1 && n2 && n1->sd != n2->sd) {
    const double smax = std::max(n1->sd, n2->sd);
    const double cross = (n1->mean * n2->sd - n2->mean * n1->sd) / (n2->sd - n1->sd);
    const double s1 = n1->sd * n1->sd;
    const double s2 = n2->sd * n2->sd;
    const double vertex = (n1->mean * s2 - n2->mean * s1) / (s2 - s1);
    for (double k : {-4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0}) {
      pts.push_back(cross + k * smax);
      pts.push_back(vertex + k * smax);
    }
  }
  std::erase_if(pts, [](double x) { return !std::isfinite(x); });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

ScanOutcome scan_st(const Distribution& g1, const Distribution& g2, const std::vector<double>& pts) {
  ScanOutcome out;
  double worst = kOrderTolerance;
  for (double t : pts) {
    const double gap = g2.cdf(t) - g1.cdf(t);
    if (gap > worst) {
      worst = gap;
      out.witness = t;
    }
  }
  return out;
}

// Scans t -> log(num(t)) - log(den(t)) for monotone nondecreasing behaviour.
template <class LogNum, class LogDen>
ScanOutcome scan_ratio(const std::vector<double>& pts, LogNum log_num, LogDen log_den) {
  ScanOutcome out;
  bool have_prev = false;
  double prev = 0.0;
  double prev_t = 0.0;
  for (double t : pts) {
    const double ln = log_num(t);
    const double ld = log_den(t);
    if (ln == -kInf && ld == -kInf) continue;  // both outside: ratio undefined
    double r;
    if (ld == -kInf)
      r = kInf;
    else if (ln == -kInf)
      r = -kInf;
    else
      r = ln - ld;
    if (have_prev) {
      bool drop;
      if (std::isfinite(r) && std::isfinite(prev))
        drop = r < prev - 1e-12 * std::max(1.0, std::abs(prev));
      else
        drop = r < prev;
      if (drop) {
        out.witness = prev_t;
        out.witness_upper = t;
        return out;
      }
    }
    have_prev = true;
    prev = r;
    prev_t = t;
  }
  return out;
}

// Exact verdicts for same-family exponential and normal pairs; the three
// relations coincide for both families.
std::optional<bool> analytic_verdict(const Distribution& g1, const Distribution& g2) {
  if (const auto* e1 = std::get_if<Exponential>(&g1.kind()))
    if (const auto* e2 = std::get_if<Exponential>(&g2.kind())) return e1->rate >= e2->rate;
  if (const auto* n1 = std::get_if<Normal>(&g1.kind()))
    if (const auto* n2 = std::get_if<Normal>(&g2.kind()))
      return n1->sd == n2->sd && n1->mean <= n2->mean;
  return std::nullopt;
}

// A point that violates G1 >= G2 for a same-family pair the analytic rule
// rejects, used when the grid scan is too coarse to see the violation.
std::optional<double> analytic_st_witness(const Distribution& g1, const Distribution& g2) {
  if (const auto* n1 = std::get_if<Normal>(&g1.kind())) {
    const auto& n2 = std::get<Normal>(g2.kind());
    if (n1->sd == n2.sd) return 0.5 * (n1->mean + n2.mean);
    const double smax = std::max(n1->sd, n2.sd);
    const double cross = (n1->mean * n2.sd - n2.mean * n1->sd) / (n2.sd - n1->sd);
    return n1->sd < n2.sd ? cross - smax : cross + smax;
  }
  const auto& e1 = std::get<Exponential>(g1.kind());
  return 1.0 / e1.rate;
}

}  // namespace

OrderCheckResult check_order(Relation relation, const Distribution& g1, const Distribution& g2,
                             int grid) {
  if (grid < kMinOrderGrid)
    throw InvalidArgument("check_order: grid must be >= " + std::to_string(kMinOrderGrid));
  if (relation != Relation::st && !(g1.has_density() && g2.has_density()))
    throw UnsupportedOrder(std::string(to_string(relation)) +
                           " order needs both distributions to have densities");

  const auto pts = order_grid(g1, g2, grid);
  ScanOutcome scan;
  switch (relation) {
    case Relation::st:
      scan = scan_st(g1, g2, pts);
      break;
    case Relation::hr:
      scan = scan_ratio(
          pts, [&](double t) { return g2.log_survival(t); },
          [&](double t) { return g1.log_survival(t); });
      break;
    case Relation::lr:
      scan = scan_ratio(
          pts, [&](double t) { return g2.log_density(t); },
          [&](double t) { return g1.log_density(t); });
      break;
  }

  OrderCheckResult result;
  result.relation = relation;
  result.grid_size = grid;
  result.holds = !scan.witness.has_value();
  result.witness = scan.witness;
  result.witness_upper = scan.witness_upper;

  if (const auto exact = analytic_verdict(g1, g2)) {
    result.holds = *exact;
    if (*exact) {
      result.witness.reset();
      result.witness_upper.reset();
    } else if (!result.witness) {
      result.witness = analytic_st_witness(g1, g2);
    }
  }
  return result;
}

Distribution pointwise_min_cdf(const Distribution& g, const Distribution& h) {
  if (g == h) return g;
  if (check_order(Relation::st, g, h).holds) return h;
  if (check_order(Relation::st, h, g).holds) return g;

  std::vector<double> xs;
  for (const auto* d : {&g, &h})
    for (double b : d->breakpoints()) xs.push_back(b);

  if (g.is_discrete() && h.is_discrete()) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<Atom> atoms;
    double prev = 0.0;
    for (double x : xs) {
      const double m = std::min(g.cdf(x), h.cdf(x));
      if (m > prev) atoms.push_back({x, m - prev});
      prev = m;
    }
    // Renormalize rounding drift so the masses sum to one exactly enough.
    const double total = std::accumulate(atoms.begin(), atoms.end(), 0.0,
                                         [](double s, const Atom& a) { return s + a.prob; });
    for (auto& a : atoms) a.prob /= total;
    return Distribution::atoms(std::move(atoms));
  }

  constexpr int kGrid = 1024;
  constexpr double kTail = 1e-10;
  for (const auto* d : {&g, &h}) {
    xs.push_back(d->quantile(kTail));
    xs.push_back(d->quantile(1.0 - kTail));
    for (int i = 1; i < kGrid; ++i) xs.push_back(d->quantile(static_cast<double>(i) / kGrid));
  }
  std::erase_if(xs, [](double x) { return !std::isfinite(x); });
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<Knot> knots;
  knots.reserve(xs.size() + 8);
  for (double x : xs) {
    const double left = std::min(g.cdf_left(x), h.cdf_left(x));
    const double right = std::min(g.cdf(x), h.cdf(x));
    if (right > left) knots.push_back({x, left});
    knots.push_back({x, right});
  }
  knots.front().p = 0.0;
  knots.back().p = 1.0;
  return Distribution::piecewise_linear(std::move(knots));
}

}  // namespace sprec
