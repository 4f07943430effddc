#pragma once

#include <cstdint>
#include <span>

#include "corrma/bit_matrix.hpp"

namespace corrma {

// Common-bit/BSC correlation model: each source observes
//   x_i^(k) = b_i xor z_i^(k),   P(z = 0) = rho,
// where b_i is a fair common bit shared by all n sources at epoch i.
struct CorrelationModel {
  int n;
  double rho;

  // n >= 1, rho in [0.5, 1]; values of rho below 0.5 are rejected, not
  // mirrored.
  CorrelationModel(int n, double rho);
};

using SourceBlock = BitMatrix;

// Draws an n x length block, one common bit per column. Deterministic for a
// fixed seed.
SourceBlock generate_block(const CorrelationModel& model, int length,
                           std::uint64_t seed);

// Exact joint pmf of one column vector x (entries 0/1, length model.n).
double joint_pmf(const CorrelationModel& model,
                 std::span<const std::uint8_t> x);

// Same pmf as a function of the number of zeros in x. The class probability
// is  0.5 * [rho^z (1-rho)^(n-z) + (1-rho)^z rho^(n-z)];  evaluated in log
// space for n > 30 to avoid underflow.
double joint_pmf_zeros(int n, double rho, int zeros);

}  // namespace corrma
