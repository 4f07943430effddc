#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "corrma/llr.hpp"

namespace corrma {

// BPSK over AWGN. ec is the per-symbol energy, n0 the one-sided noise
// spectral density (noise variance n0/2 per real sample). The link SNR used
// throughout the project is
//   gamma = ec / (n0/2) = 2 ec / n0,
// i.e. signal power over noise power, so that the AWGN capacity is
// 0.5 log2(1 + gamma) and the all-zero channel-LLR density is the consistent
// Gaussian with mean mu_ch = 2 gamma and variance 2 mu_ch.
struct ChannelConfig {
  double ec;
  double n0;

  ChannelConfig(double ec, double n0);
  static ChannelConfig from_snr(double gamma, double ec = 1.0);

  double gamma() const { return 2.0 * ec / n0; }
};

// nu_i = sqrt(ec) (2 s_i - 1); bit 0 maps to -sqrt(ec).
std::vector<double> modulate(std::span<const std::uint8_t> codeword, double ec);

// Adds Gaussian noise with variance n0/2 per sample, deterministic per seed.
void add_awgn(std::span<double> signal, double n0, std::uint64_t seed);

// LLR_i = -4 sqrt(ec) y_i / n0 under the ln P(0)/P(1) convention.
LlrBlock channel_llr(std::span<const double> y, double ec, double n0);

}  // namespace corrma
