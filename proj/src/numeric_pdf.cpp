#include "corrma/numeric_pdf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "corrma/llr.hpp"

namespace corrma {

int PdfGrid::nearest(double v) const {
  const int i = static_cast<int>(std::lround((v - z_min) / step));
  return std::clamp(i, 0, bins() - 1);
}

NumericPdf::NumericPdf(const PdfGrid& grid)
    : grid_(grid), mass_(grid.bins(), 0.0) {}

NumericPdf NumericPdf::delta(const PdfGrid& grid, double z) {
  NumericPdf pdf(grid);
  pdf.mass_[grid.nearest(z)] = 1.0;
  return pdf;
}

NumericPdf NumericPdf::gaussian_consistent(const PdfGrid& grid, double mu) {
  if (mu < 0.0)
    throw std::invalid_argument("gaussian_consistent: mu must be >= 0");
  if (mu == 0.0) return delta(grid, 0.0);
  NumericPdf pdf(grid);
  const double inv = 1.0 / (4.0 * mu);  // variance 2 mu
  double sum = 0.0;
  for (int i = 0; i < grid.bins(); ++i) {
    const double d = grid.z(i) - mu;
    const double w = std::exp(-d * d * inv);
    pdf.mass_[i] = w;
    sum += w;
  }
  // leakage estimated from the tails beyond the grid edges
  const double sd = std::sqrt(2.0 * mu);
  const double leak_hi = 0.5 * std::erfc((grid.z_max - mu) / (sd * std::sqrt(2.0)));
  const double leak_lo = 0.5 * std::erfc((mu - grid.z_min) / (sd * std::sqrt(2.0)));
  if (leak_hi + leak_lo > 1e-4)
    throw std::invalid_argument(
        "gaussian_consistent: grid too narrow for this mu (leakage > 1e-4)");
  for (double& m : pdf.mass_) m /= sum;
  return pdf;
}

NumericPdf NumericPdf::clipped_gaussian_consistent(const PdfGrid& grid,
                                                   double mu) {
  if (mu < 0.0)
    throw std::invalid_argument("clipped_gaussian_consistent: mu must be >= 0");
  if (mu == 0.0) return delta(grid, 0.0);
  NumericPdf pdf(grid);
  const double sd = std::sqrt(2.0 * mu);
  const double root2 = std::sqrt(2.0);
  // cell boundaries, mass inside the clip range from the Gaussian CDF
  auto cdf = [&](double z) { return 0.5 * std::erfc((mu - z) / (sd * root2)); };
  const int lo_bin = grid.nearest(-kLlrClip);
  const int hi_bin = grid.nearest(kLlrClip);
  for (int i = lo_bin; i <= hi_bin; ++i) {
    const double a = grid.z(i) - 0.5 * grid.step;
    const double b = grid.z(i) + 0.5 * grid.step;
    pdf.mass_[i] = cdf(b) - cdf(a);
  }
  // everything beyond the clip lands on the clip bins
  pdf.mass_[hi_bin] += 1.0 - cdf(grid.z(hi_bin) + 0.5 * grid.step);
  pdf.mass_[lo_bin] += cdf(grid.z(lo_bin) - 0.5 * grid.step);
  pdf.normalize();
  return pdf;
}

NumericPdf NumericPdf::bsc_flip(double rho) const {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("bsc_flip: rho must lie in [0, 1]");
  NumericPdf out(grid_);
  const int n = grid_.bins();
  for (int i = 0; i < n; ++i) {
    // the grid is symmetric, so -z(i) is exactly z(n-1-i)
    out.mass_[i] = rho * mass_[i] + (1.0 - rho) * mass_[n - 1 - i];
  }
  return out;
}

NumericPdf NumericPdf::convolve_with(const NumericPdf& other) const {
  if (!(grid_ == other.grid_))
    throw std::invalid_argument("convolve_with: grid mismatch");
  NumericPdf out(grid_);
  const int n = grid_.bins();
  const int center = grid_.nearest(0.0);
  for (int i = 0; i < n; ++i) {
    const double mi = mass_[i];
    if (mi == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const double mj = other.mass_[j];
      if (mj == 0.0) continue;
      // z(i) + z(j) lands exactly on the grid; fold overflow into the edges
      const int k = std::clamp(i + j - center, 0, n - 1);
      out.mass_[k] += mi * mj;
    }
  }
  return out;
}

double NumericPdf::total_mass() const {
  double s = 0.0;
  for (const double m : mass_) s += m;
  return s;
}

double NumericPdf::mean() const {
  double s = 0.0;
  for (int i = 0; i < grid_.bins(); ++i) s += mass_[i] * grid_.z(i);
  return s;
}

double NumericPdf::variance() const {
  const double mu = mean();
  double s = 0.0;
  for (int i = 0; i < grid_.bins(); ++i) {
    const double d = grid_.z(i) - mu;
    s += mass_[i] * d * d;
  }
  return s;
}

void NumericPdf::normalize() {
  const double s = total_mass();
  if (s <= 0.0) throw std::runtime_error("NumericPdf: zero total mass");
  for (double& m : mass_) m /= s;
  cdf_.clear();
}

void NumericPdf::build_cdf() {
  cdf_.resize(mass_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    acc += mass_[i];
    cdf_[i] = acc;
  }
}

double NumericPdf::sample(Rng& rng) const {
  if (cdf_.empty())
    throw std::logic_error("NumericPdf::sample: call build_cdf() first");
  const double u = rng.uniform() * cdf_.back();
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  const int i = static_cast<int>(it - cdf_.begin());
  return grid_.z(std::min(i, grid_.bins() - 1));
}

}  // namespace corrma
