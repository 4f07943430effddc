#pragma once

#include <span>
#include <utility>
#include <vector>

namespace corrma {

// H_b(p) = -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0.
double binary_entropy(double p);

// Joint entropy H(n) of one source column under the common-bit/BSC model,
// computed as a binomial sum over the number of zeros. H(0) = 0 by
// convention.
double joint_entropy(int n, double rho);

struct CharacteristicPoints {
  double lambda_bal;  // r H(n) / n
  double lambda_unb;  // r [H(n) - H(n-1)]
  double lambda_lim;  // r H_b(rho)
};

CharacteristicPoints characteristic_points(int n, double rho, double rate);

// Shannon bound conversions, capacity in bits per channel use vs linear SNR
// (signal power over noise power).
double capacity_from_snr(double gamma);
double snr_from_capacity(double lambda);

struct ConstraintReport {
  struct Entry {
    int subset_size;
    double sum;
    double bound;
    double slack;
  };
  std::vector<Entry> violated;
  std::vector<Entry> tight;  // |slack| <= 1e-9 bits
};

// Feasible capacity region for n exchangeable sources at common code rate r:
// a capacity vector is feasible iff for every nonempty subset of size p,
//   sum of the subset >= r [H(n) - H(n-p)].
// Because the bound depends only on p, checking the p smallest capacities
// for each p suffices; the exhaustive subset check is kept as a test oracle.
class FeasibleRegion {
 public:
  FeasibleRegion(int n, double rho, double rate);

  int n() const { return n_; }
  double rho() const { return rho_; }
  double rate() const { return rate_; }

  // cached H(0..n)
  double entropy(int k) const;

  CharacteristicPoints points() const;

  bool is_feasible(std::span<const double> lambdas,
                   ConstraintReport* report = nullptr) const;

  // (lambda1, lambda2) border points with the capacities of sources 3..n
  // held at `fixed`. For each lambda1 on the grid, the smallest feasible
  // lambda2 is located by bisection. Fixed values must each be at least
  // lambda_unb(n) and must not make the region empty on their own.
  std::vector<std::pair<double, double>> boundary_projection(
      std::span<const double> fixed, double grid_step = 1e-3) const;

  // Smallest feasible lambda1 when lambda2 is unconstrained (left edge of
  // the projection above).
  double min_lambda1(std::span<const double> fixed) const;

 private:
  int n_;
  double rho_;
  double rate_;
  std::vector<double> entropy_;  // H(0..n)
};

}  // namespace corrma
