#include "sprec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sprec/blocks.hpp"
#include "sprec/errors.hpp"

namespace sprec::oracle {
namespace {

template <class T, class Fn>
std::vector<T> collect(std::size_t n, std::uint64_t seed, unsigned workers, Fn one) {
  auto blocks = run_blocks(n, seed, workers, [&](Rng& rng, std::size_t, std::size_t count) {
    std::vector<T> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(one(rng));
    return out;
  });
  std::vector<T> all;
  all.reserve(n);
  for (auto& b : blocks) all.insert(all.end(), b.begin(), b.end());
  return all;
}

}  // namespace

LoadSharingModel::LoadSharingModel(double lambda_, double beta_) : lambda(lambda_), beta(beta_) {
  if (!(1.0 < lambda && lambda < beta && beta < 1.0 + lambda))
    throw InvalidArgument("LoadSharingModel: need 1 < lambda < beta < 1 + lambda");
}

double LoadSharingModel::survival_x(double x) const {
  if (x <= 0.0) return 1.0;
  const double k = lambda / (1.0 + lambda - beta);
  return (1.0 - k) * std::exp(-(1.0 + lambda) * x) + k * std::exp(-beta * x);
}

std::vector<Pair> load_sharing_sample(const LoadSharingModel& model, std::size_t n,
                                      std::uint64_t seed, unsigned workers) {
  return collect<Pair>(n, seed, workers, [&](Rng& rng) {
    const double y = rng.exponential(model.lambda);
    const double e = rng.exponential(1.0);
    return Pair{e < y ? e : y + (e - y) / model.beta, y};
  });
}

std::vector<Triple> order_stats_triple_sample(std::size_t n, std::uint64_t seed,
                                              const Distribution& base, unsigned workers) {
  if (n < 1) throw InvalidArgument("order_stats_triple_sample: n must be >= 1");
  return collect<Triple>(n, seed, workers, [&](Rng& rng) {
    double y[5];
    for (double& v : y) v = base.quantile(rng.uniform());
    return Triple{std::min(y[0], y[1]), std::max(y[0], y[1]), std::max({y[2], y[3], y[4]})};
  });
}

std::vector<ShockDraw> mo_construction_sample(double alpha1, double alpha2, std::size_t n,
                                              std::uint64_t seed, unsigned workers) {
  if (!(alpha1 > 0.0 && alpha1 < 1.0 && alpha2 > 0.0 && alpha2 < 1.0))
    throw InvalidArgument("mo_construction_sample: alphas must lie in (0,1)");
  const double mu1 = 1.0 / alpha1 - 1.0;
  const double mu2 = 1.0 / alpha2 - 1.0;
  return collect<ShockDraw>(n, seed, workers, [&](Rng& rng) {
    const double v = rng.exponential(mu1);
    const double w = rng.exponential(mu2);
    const double z = rng.exponential(1.0);
    return ShockDraw{std::min(v, z), std::min(w, z), z <= std::min(v, w)};
  });
}

EtaBracket grid_eta_oracle(const Copula& c, const Distribution& g1, const Distribution& g2,
                           int grid) {
  if (grid < 16) throw InvalidArgument("grid_eta_oracle: grid must be >= 16");
  const std::size_t m = static_cast<std::size_t>(grid);
  std::vector<double> q1(m + 1), q2(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    const double p = static_cast<double>(i) / grid;
    q1[i] = g1.quantile(p);
    q2[i] = g2.quantile(p);
  }
  // C on the lattice, row-major in u.
  std::vector<double> lattice((m + 1) * (m + 1));
  for (std::size_t i = 0; i <= m; ++i)
    for (std::size_t j = 0; j <= m; ++j)
      lattice[i * (m + 1) + j] =
          copula_cdf(c, static_cast<double>(i) / grid, static_cast<double>(j) / grid);
  auto at = [&](std::size_t i, std::size_t j) { return lattice[i * (m + 1) + j]; };

  // Cell (i,j) is (u_i, u_{i+1}] x (v_j, v_{j+1}]. Quantiles are
  // nondecreasing, so comparing the extreme corners decides the cell.
  double inside = 0.0;
  double straddle = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double mass =
          std::max(0.0, at(i + 1, j + 1) - at(i, j + 1) - at(i + 1, j) + at(i, j));
      if (q1[i + 1] <= q2[j])
        inside += mass;
      else if (!(q1[i] > q2[j + 1]))
        straddle += mass;
    }
  }
  return {std::clamp(inside, 0.0, 1.0), std::clamp(inside + straddle, 0.0, 1.0)};
}

}  // namespace sprec::oracle
