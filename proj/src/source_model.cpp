#include "corrma/source_model.hpp"

#include <cmath>
#include <stdexcept>

#include "corrma/llr.hpp"
#include "corrma/rng.hpp"

namespace corrma {

CorrelationModel::CorrelationModel(int n_in, double rho_in)
    : n(n_in), rho(rho_in) {
  if (n < 1) throw std::invalid_argument("CorrelationModel: n must be >= 1");
  if (!(rho >= 0.5 && rho <= 1.0))
    throw std::invalid_argument("CorrelationModel: rho must lie in [0.5, 1]");
}

SourceBlock generate_block(const CorrelationModel& model, int length,
                           std::uint64_t seed) {
  if (length < 1)
    throw std::invalid_argument("generate_block: length must be >= 1");
  SourceBlock block(model.n, length);
  Rng rng(seed);
  for (int i = 0; i < length; ++i) {
    const std::uint8_t common = rng.bit() ? 1 : 0;
    for (int k = 0; k < model.n; ++k) {
      // z = 0 (bit kept) with probability rho
      const bool keep = rng.uniform() < model.rho;
      block.at(k, i) = keep ? common : static_cast<std::uint8_t>(common ^ 1u);
    }
  }
  return block;
}

double joint_pmf_zeros(int n, double rho, int zeros) {
  const double q = 1.0 - rho;
  if (rho >= 1.0) return (zeros == 0 || zeros == n) ? 0.5 : 0.0;
  if (n <= 30) {
    return 0.5 * (std::pow(rho, zeros) * std::pow(q, n - zeros) +
                  std::pow(q, zeros) * std::pow(rho, n - zeros));
  }
  const double la = zeros * std::log(rho) + (n - zeros) * std::log(q);
  const double lb = zeros * std::log(q) + (n - zeros) * std::log(rho);
  return 0.5 * std::exp(max_star(la, lb));
}

double joint_pmf(const CorrelationModel& model,
                 std::span<const std::uint8_t> x) {
  if (static_cast<int>(x.size()) != model.n)
    throw std::invalid_argument("joint_pmf: vector length must equal n");
  int zeros = 0;
  for (const auto b : x) {
    if (b > 1) throw std::invalid_argument("joint_pmf: entries must be 0 or 1");
    zeros += (b == 0);
  }
  return joint_pmf_zeros(model.n, model.rho, zeros);
}

}  // namespace corrma
