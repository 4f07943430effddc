#pragma once

#include <cstdint>
#include <vector>

#include "corrma/rng.hpp"

namespace corrma {

// Uniform LLR grid for discretized message densities. The default span
// [-60, 60] at step 0.05 covers the +-50 LLR clip with headroom and is
// symmetric, so sign flips map bins onto bins exactly.
struct PdfGrid {
  double z_min = -60.0;
  double z_max = 60.0;
  double step = 0.05;

  int bins() const { return static_cast<int>((z_max - z_min) / step + 0.5) + 1; }
  double z(int i) const { return z_min + i * step; }
  int nearest(double v) const;  // clamped to the grid

  bool operator==(const PdfGrid& other) const {
    return z_min == other.z_min && z_max == other.z_max && step == other.step;
  }
};

// Probability mass on the grid points. Every transform keeps total mass 1
// within 1e-9; mass that would land outside the grid is folded into the edge
// bins.
class NumericPdf {
 public:
  explicit NumericPdf(const PdfGrid& grid);

  static NumericPdf delta(const PdfGrid& grid, double z);

  // Consistent Gaussian: mean mu, variance 2 mu (channel SNR gamma = mu/2).
  // Throws when more than 1e-4 of the mass would leak off the grid.
  static NumericPdf gaussian_consistent(const PdfGrid& grid, double mu);

  // Same density pushed through the +-50 LLR clip: out-of-clip mass sits at
  // the clip bins. This is what saturated decoder output actually looks
  // like, and it stays valid for arbitrarily large mu.
  static NumericPdf clipped_gaussian_consistent(const PdfGrid& grid, double mu);

  // a_in(z) = rho a(z) + (1-rho) a(-z)
  NumericPdf bsc_flip(double rho) const;

  // density of the sum of independent draws; grids must match
  NumericPdf convolve_with(const NumericPdf& other) const;

  double total_mass() const;
  double mean() const;
  double variance() const;

  // inverse-CDF draw returning a grid point
  double sample(Rng& rng) const;

  const PdfGrid& grid() const { return grid_; }
  const std::vector<double>& mass() const { return mass_; }
  std::vector<double>& mass() { return mass_; }

  void normalize();
  void build_cdf();  // call after the mass is final, before sample()

 private:
  PdfGrid grid_;
  std::vector<double> mass_;
  std::vector<double> cdf_;
};

}  // namespace corrma
