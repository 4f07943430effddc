#include "corrma/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "corrma/rng.hpp"

namespace corrma {

ChannelConfig::ChannelConfig(double ec_in, double n0_in) : ec(ec_in), n0(n0_in) {
  if (!(ec > 0.0)) throw std::invalid_argument("ChannelConfig: ec must be > 0");
  if (!(n0 > 0.0)) throw std::invalid_argument("ChannelConfig: n0 must be > 0");
}

ChannelConfig ChannelConfig::from_snr(double gamma, double ec) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("ChannelConfig: gamma must be > 0");
  return ChannelConfig(ec, 2.0 * ec / gamma);
}

std::vector<double> modulate(std::span<const std::uint8_t> codeword, double ec) {
  if (!(ec > 0.0)) throw std::invalid_argument("modulate: ec must be > 0");
  const double amp = std::sqrt(ec);
  std::vector<double> out(codeword.size());
  for (std::size_t i = 0; i < codeword.size(); ++i) {
    if (codeword[i] > 1)
      throw std::invalid_argument("modulate: entries must be 0 or 1");
    out[i] = codeword[i] ? amp : -amp;
  }
  return out;
}

void add_awgn(std::span<double> signal, double n0, std::uint64_t seed) {
  if (!(n0 > 0.0)) throw std::invalid_argument("add_awgn: n0 must be > 0");
  const double sigma = std::sqrt(0.5 * n0);
  Rng rng(seed);
  for (double& v : signal) v += sigma * rng.gaussian();
}

LlrBlock channel_llr(std::span<const double> y, double ec, double n0) {
  if (!(ec > 0.0) || !(n0 > 0.0))
    throw std::invalid_argument("channel_llr: ec and n0 must be > 0");
  const double scale = -4.0 * std::sqrt(ec) / n0;
  LlrBlock out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = scale * y[i];
  return out;
}

}  // namespace corrma
