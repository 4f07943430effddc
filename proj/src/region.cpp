#include "corrma/region.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "corrma/source_model.hpp"

namespace corrma {

namespace {

constexpr double kTightTol = 1e-9;

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("binary_entropy: p must lie in [0, 1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double joint_entropy(int n, double rho) {
  if (n < 0) throw std::invalid_argument("joint_entropy: n must be >= 0");
  if (!(rho >= 0.5 && rho <= 1.0))
    throw std::invalid_argument("joint_entropy: rho must lie in [0.5, 1]");
  if (n == 0) return 0.0;
  // Accumulate in extended precision: the strict-interior margins of the
  // entropy bounds can be ~1e-13 at rho = 0.99.
  long double h = 0.0L;
  for (int nb = 0; nb <= n; ++nb) {
    const double p = joint_pmf_zeros(n, rho, nb);
    if (p <= 0.0) continue;
    h -= static_cast<long double>(binomial(n, nb)) * p * std::log2(p);
  }
  return static_cast<double>(h);
}

CharacteristicPoints characteristic_points(int n, double rho, double rate) {
  if (n < 2)
    throw std::invalid_argument("characteristic_points: n must be >= 2");
  if (!(rate > 0.0 && rate <= 1.0))
    throw std::invalid_argument("characteristic_points: rate must lie in (0, 1]");
  const double hn = joint_entropy(n, rho);
  const double hn1 = joint_entropy(n - 1, rho);
  return {rate * hn / n, rate * (hn - hn1), rate * binary_entropy(rho)};
}

double capacity_from_snr(double gamma) {
  if (gamma < 0.0)
    throw std::invalid_argument("capacity_from_snr: gamma must be >= 0");
  return 0.5 * std::log2(1.0 + gamma);
}

double snr_from_capacity(double lambda) {
  if (lambda < 0.0)
    throw std::invalid_argument("snr_from_capacity: lambda must be >= 0");
  return std::exp2(2.0 * lambda) - 1.0;
}

FeasibleRegion::FeasibleRegion(int n, double rho, double rate)
    : n_(n), rho_(rho), rate_(rate) {
  if (n < 1) throw std::invalid_argument("FeasibleRegion: n must be >= 1");
  if (!(rho >= 0.5 && rho <= 1.0))
    throw std::invalid_argument("FeasibleRegion: rho must lie in [0.5, 1]");
  if (!(rate > 0.0 && rate <= 1.0))
    throw std::invalid_argument("FeasibleRegion: rate must lie in (0, 1]");
  entropy_.resize(n + 1);
  for (int k = 0; k <= n; ++k) entropy_[k] = joint_entropy(k, rho);
}

double FeasibleRegion::entropy(int k) const {
  if (k < 0 || k > n_)
    throw std::invalid_argument("FeasibleRegion::entropy: k out of range");
  return entropy_[k];
}

CharacteristicPoints FeasibleRegion::points() const {
  if (n_ < 2)
    throw std::invalid_argument("FeasibleRegion::points: needs n >= 2");
  return {rate_ * entropy_[n_] / n_, rate_ * (entropy_[n_] - entropy_[n_ - 1]),
          rate_ * binary_entropy(rho_)};
}

bool FeasibleRegion::is_feasible(std::span<const double> lambdas,
                                 ConstraintReport* report) const {
  if (static_cast<int>(lambdas.size()) != n_)
    throw std::invalid_argument("is_feasible: capacity vector length must be n");
  for (const double v : lambdas)
    if (v < 0.0)
      throw std::invalid_argument("is_feasible: capacities must be >= 0");

  std::vector<double> sorted(lambdas.begin(), lambdas.end());
  std::sort(sorted.begin(), sorted.end());

  // The subset bound depends only on the subset size p, so the p smallest
  // capacities give the binding constraint for each p.
  bool ok = true;
  double acc = 0.0;
  for (int p = 1; p <= n_; ++p) {
    acc += sorted[p - 1];
    const double bound = rate_ * (entropy_[n_] - entropy_[n_ - p]);
    const double slack = acc - bound;
    if (report && std::abs(slack) <= kTightTol)
      report->tight.push_back({p, acc, bound, slack});
    if (slack < 0.0) {
      ok = false;
      if (report) report->violated.push_back({p, acc, bound, slack});
    }
  }
  return ok;
}

double FeasibleRegion::min_lambda1(std::span<const double> fixed) const {
  const double hi_cap = rate_ * entropy_[n_];
  std::vector<double> probe(n_);
  auto feasible_at = [&](double lam1) {
    probe[0] = lam1;
    probe[1] = hi_cap;  // lambda2 unconstrained
    std::copy(fixed.begin(), fixed.end(), probe.begin() + 2);
    return is_feasible(probe);
  };
  if (!feasible_at(hi_cap))
    throw std::invalid_argument(
        "boundary_projection: fixed capacities make the region empty");
  double lo = 0.0, hi = hi_cap;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible_at(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::vector<std::pair<double, double>> FeasibleRegion::boundary_projection(
    std::span<const double> fixed, double grid_step) const {
  if (n_ < 2)
    throw std::invalid_argument("boundary_projection: needs n >= 2");
  if (static_cast<int>(fixed.size()) != n_ - 2)
    throw std::invalid_argument(
        "boundary_projection: expected capacities for sources 3..n");
  if (!(grid_step > 0.0))
    throw std::invalid_argument("boundary_projection: grid_step must be > 0");
  const double unb = rate_ * (entropy_[n_] - entropy_[n_ - 1]);
  for (const double v : fixed)
    if (v < unb - 1e-12)
      throw std::invalid_argument(
          "boundary_projection: fixed capacities must be >= lambda_unb(n)");

  const double lam1_min = min_lambda1(fixed);
  // Per-link capacity r always satisfies every constraint (entropy
  // increments are at most 1 bit), so the curve is flat beyond r.
  const double lam1_max = std::max(rate_, lam1_min);
  const double hi_cap = rate_ * entropy_[n_];

  std::vector<double> probe(n_);
  std::copy(fixed.begin(), fixed.end(), probe.begin() + 2);
  auto min_lambda2 = [&](double lam1) {
    probe[0] = lam1;
    double lo = 0.0, hi = hi_cap;
    probe[1] = hi;
    if (!is_feasible(probe)) return -1.0;  // no feasible lambda2 at this lam1
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      probe[1] = mid;
      (is_feasible(probe) ? hi : lo) = mid;
    }
    return hi;
  };

  std::vector<std::pair<double, double>> out;
  const int steps = static_cast<int>(std::floor((lam1_max - lam1_min) / grid_step + 1e-9));
  for (int i = 0; i <= steps; ++i) {
    const double lam1 = lam1_min + i * grid_step;
    const double lam2 = min_lambda2(lam1);
    if (lam2 >= 0.0) out.emplace_back(lam1, lam2);
  }
  return out;
}

}  // namespace corrma
