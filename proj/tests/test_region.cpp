#include <stdexcept>
#include <algorithm>
#include <cmath>
#include <vector>

#include "corrma/region.hpp"
#include "corrma/rng.hpp"
#include "corrma/source_model.hpp"
#include "doctest.h"

using namespace corrma;

namespace {

// entropy oracle: -sum p log2 p over all 2^n outcomes of the joint pmf
double entropy_oracle(int n, double rho) {
  const CorrelationModel model(n, rho);
  double h = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::uint8_t> x(n);
    for (int k = 0; k < n; ++k) x[k] = (mask >> k) & 1u;
    const double p = joint_pmf(model, x);
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

// literal subset enumeration of the region constraints
bool feasible_oracle(const std::vector<double>& lambdas, double rho, double rate) {
  const int n = static_cast<int>(lambdas.size());
  std::vector<double> H(n + 1);
  for (int k = 0; k <= n; ++k) H[k] = joint_entropy(k, rho);
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    double sum = 0.0;
    int p = 0;
    for (int k = 0; k < n; ++k)
      if (mask & (1u << k)) {
        sum += lambdas[k];
        ++p;
      }
    if (sum < rate * (H[n] - H[n - p])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("binary_entropy") {
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(0.95) == doctest::Approx(0.28640).epsilon(1e-5 / 0.2864));
  CHECK_THROWS_AS(binary_entropy(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(binary_entropy(1.1), std::invalid_argument);
}

TEST_CASE("joint_entropy examples and oracle") {
  CHECK(joint_entropy(0, 0.9) == 0.0);
  CHECK(joint_entropy(1, 0.77) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(joint_entropy(2, 0.95) - 1.4530) < 1e-4);
  CHECK(std::abs(joint_entropy(3, 0.95) - 1.8166) < 1e-4);
  CHECK_THROWS_AS(joint_entropy(2, 0.3), std::invalid_argument);

  for (const double rho : {0.5, 0.8, 0.9, 0.95, 0.99})
    for (int n = 1; n <= 10; ++n)
      CHECK(joint_entropy(n, rho) ==
            doctest::Approx(entropy_oracle(n, rho)).epsilon(1e-11));
}

TEST_CASE("characteristic points") {
  const auto p = characteristic_points(2, 0.95, 0.5);
  CHECK(std::abs(p.lambda_bal - 0.36325) < 1e-4);
  CHECK(std::abs(p.lambda_unb - 0.22651) < 1e-4);
  CHECK(std::abs(p.lambda_lim - 0.14320) < 1e-5);

  const auto u = characteristic_points(2, 0.5, 0.5);
  CHECK(u.lambda_bal == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(u.lambda_unb == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(u.lambda_lim == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("snr/capacity conversions") {
  CHECK(capacity_from_snr(0.0) == 0.0);
  CHECK(capacity_from_snr(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(snr_from_capacity(0.36325) == doctest::Approx(0.6546).epsilon(1e-3 / 0.65));
  CHECK_THROWS_AS(capacity_from_snr(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(snr_from_capacity(-0.1), std::invalid_argument);

  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const double lam = 2.0 * rng.uniform();
    CHECK(capacity_from_snr(snr_from_capacity(lam)) ==
          doctest::Approx(lam).epsilon(1e-12));
  }
}

TEST_CASE("is_feasible examples") {
  const FeasibleRegion region(2, 0.95, 0.5);
  const auto pts = region.points();

  ConstraintReport report;
  const std::vector<double> balanced{pts.lambda_bal, pts.lambda_bal};
  CHECK(region.is_feasible(balanced, &report));
  bool p2_tight = false;
  for (const auto& t : report.tight) p2_tight = p2_tight || t.subset_size == 2;
  CHECK(p2_tight);

  const std::vector<double> below{0.36, 0.36};
  ConstraintReport rep2;
  CHECK_FALSE(region.is_feasible(below, &rep2));
  REQUIRE(!rep2.violated.empty());
  CHECK(rep2.violated.front().subset_size == 2);

  const std::vector<double> half{0.5, 0.5};
  CHECK(region.is_feasible(half));
  CHECK(FeasibleRegion(2, 0.99, 0.5).is_feasible(half));

  CHECK_THROWS_AS(region.is_feasible(std::vector<double>{-0.1, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(region.is_feasible(std::vector<double>{0.5}),
                  std::invalid_argument);
}

TEST_CASE("is_feasible agrees with subset enumeration") {
  Rng rng(17);
  for (int n = 2; n <= 8; ++n) {
    const double rho = 0.95;
    const FeasibleRegion region(n, rho, 0.5);
    int disagreements = 0;
    for (int trial = 0; trial < 2000; ++trial) {
      std::vector<double> lam(n);
      for (auto& v : lam) v = 0.6 * rng.uniform();
      if (region.is_feasible(lam) != feasible_oracle(lam, rho, 0.5))
        ++disagreements;
    }
    CHECK(disagreements == 0);
  }
}

TEST_CASE("characteristic points are non-increasing in n and ordered") {
  for (const double rho : {0.9, 0.95, 0.99}) {
    double prev_bal = 1e9, prev_unb = 1e9;
    for (int n = 2; n <= 20; ++n) {
      const auto p = characteristic_points(n, rho, 0.5);
      CHECK(p.lambda_bal <= prev_bal + 1e-12);
      CHECK(p.lambda_unb <= prev_unb + 1e-12);
      CHECK(p.lambda_bal >= p.lambda_unb - 1e-12);
      prev_bal = p.lambda_bal;
      prev_unb = p.lambda_unb;
    }
  }
}

TEST_CASE("unbalanced point converges to the common limit r H_b") {
  const double rho = 0.95, r = 0.5;
  const double lim = r * binary_entropy(rho);
  double prev_gap = 1e9;
  for (int n = 2; n <= 30; ++n) {
    const auto p = characteristic_points(n, rho, r);
    const double gap = std::abs(p.lambda_unb - lim);
    CHECK(gap <= prev_gap + 1e-12);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-3);
  // the balanced point converges at rate r/n, reaching ~r/30 here
  const auto p30 = characteristic_points(30, rho, r);
  CHECK(std::abs(p30.lambda_bal - lim) < 0.5 / 30 + 1e-6);
}

TEST_CASE("joint entropy bounds and vanishing upper-bound gap") {
  for (const double rho : {0.9, 0.95, 0.99}) {
    const double hb = binary_entropy(rho);
    for (int n = 1; n <= 20; ++n) {
      const double h = joint_entropy(n, rho);
      CHECK(h >= 1.0 + (n - 1) * hb - 1e-9);
      CHECK(h <= 1.0 + n * hb + 1e-9);
    }
  }
  // the upper-bound gap decreases and vanishes for large n
  const double rho = 0.9, hb = binary_entropy(rho);
  double prev = 1e9;
  for (int n = 1; n <= 30; ++n) {
    const double gap = 1.0 + n * hb - joint_entropy(n, rho);
    CHECK(gap >= -1e-12);
    CHECK(gap <= prev + 1e-12);
    prev = gap;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("pinning one link at its minimum reduces to the smaller region") {
  Rng rng(23);
  const double rho = 0.95, r = 0.5;
  for (int n = 3; n <= 8; ++n) {
    const FeasibleRegion big(n, rho, r);
    const FeasibleRegion small(n - 1, rho, r);
    const double unb = big.points().lambda_unb;
    int bad = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
      std::vector<double> head(n - 1);
      for (auto& v : head) v = 0.6 * rng.uniform();
      std::vector<double> full = head;
      full.push_back(unb);
      if (big.is_feasible(full) != small.is_feasible(head)) ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("boundary projection") {
  SUBCASE("minimal third-link capacity reproduces the n = 2 border") {
    const FeasibleRegion r3(3, 0.95, 0.5);
    const FeasibleRegion r2(2, 0.95, 0.5);
    const double unb3 = r3.points().lambda_unb;
    const std::vector<double> fixed{unb3};
    const double step = 5e-3;  // the acceptance suite runs the 1e-3 grid
    const auto c3 = r3.boundary_projection(fixed, step);
    const auto c2 = r2.boundary_projection({}, step);
    REQUIRE(std::abs(static_cast<int>(c3.size()) - static_cast<int>(c2.size())) <= 1);
    const std::size_t m = std::min(c3.size(), c2.size());
    REQUIRE(m > 10);
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(std::abs(c3[i].first - c2[i].first) < 1e-9);
      CHECK(std::abs(c3[i].second - c2[i].second) < 2 * step);
    }
  }

  SUBCASE("lambda3 >= r: widest projection matches the direct constraints") {
    const FeasibleRegion r3(3, 0.95, 0.5);
    const std::vector<double> fixed{0.5};
    const auto curve = r3.boundary_projection(fixed, 5e-3);
    REQUIRE(!curve.empty());
    // direct evaluation: with lambda3 = r slack, the binding constraints on
    // (l1, l2) are the p = 1 bound, the pair bound with source 3, and the
    // full-set bound
    const double H3 = r3.entropy(3), H2 = r3.entropy(2), H1 = r3.entropy(1);
    const double unb = 0.5 * (H3 - H2);
    double prev = 1e9;
    for (const auto& [l1, l2] : curve) {
      const double expect =
          std::max({unb, 0.5 * (H3 - H1) - 0.5, 0.5 * H3 - 0.5 - l1});
      CHECK(std::abs(l2 - expect) < 1e-6);
      CHECK(l2 <= prev + 1e-12);  // monotone non-increasing
      prev = l2;
    }
  }

  SUBCASE("independent sources give the square corner") {
    const FeasibleRegion r2(2, 0.5, 0.5);
    const auto curve = r2.boundary_projection({}, 1e-3);
    REQUIRE(curve.size() == 1);
    CHECK(curve[0].first == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(curve[0].second == doctest::Approx(0.5).epsilon(1e-9));
  }

  SUBCASE("fixed values below lambda_unb are rejected") {
    const FeasibleRegion r3(3, 0.95, 0.5);
    const std::vector<double> too_low{0.5 * r3.points().lambda_unb};
    CHECK_THROWS_AS(r3.boundary_projection(too_low, 1e-3),
                    std::invalid_argument);
  }

  SUBCASE("fixed values that empty the region are rejected") {
    // n = 4 with both fixed capacities at lambda_unb(4) violates their own
    // pair constraint
    const FeasibleRegion r4(4, 0.95, 0.5);
    const double unb4 = r4.points().lambda_unb;
    const double pair_bound = 0.5 * (r4.entropy(4) - r4.entropy(2));
    REQUIRE(2 * unb4 < pair_bound);  // premise of the rejection
    const std::vector<double> fixed{unb4, unb4};
    CHECK_THROWS_AS(r4.boundary_projection(fixed, 1e-3),
                    std::invalid_argument);
  }
}

TEST_CASE("entropy cache matches joint_entropy") {
  const FeasibleRegion region(6, 0.9, 0.5);
  for (int k = 0; k <= 6; ++k)
    CHECK(region.entropy(k) == doctest::Approx(joint_entropy(k, 0.9)).epsilon(1e-15));
}
