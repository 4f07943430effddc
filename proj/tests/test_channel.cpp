#include <stdexcept>
#include <cmath>
#include <vector>

#include "corrma/channel.hpp"
#include "doctest.h"

using namespace corrma;

TEST_CASE("modulate") {
  const std::vector<std::uint8_t> bits{0, 1};
  const auto s = modulate(bits, 1.0);
  CHECK(s[0] == doctest::Approx(-1.0));
  CHECK(s[1] == doctest::Approx(1.0));

  const std::vector<std::uint8_t> zeros(4, 0);
  const auto z = modulate(zeros, 4.0);
  for (const double v : z) CHECK(v == doctest::Approx(-2.0));

  const std::vector<std::uint8_t> bad{0, 2};
  CHECK_THROWS_AS(modulate(bad, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(modulate(bits, 0.0), std::invalid_argument);

  // constant modulus: mean of nu^2 equals ec
  const std::vector<std::uint8_t> word{0, 1, 1, 0, 1, 0, 0, 1};
  const auto m = modulate(word, 2.5);
  double energy = 0.0;
  for (const double v : m) energy += v * v;
  CHECK(energy / static_cast<double>(m.size()) == doctest::Approx(2.5));
}

TEST_CASE("add_awgn") {
  SUBCASE("vanishing noise") {
    std::vector<double> s{1.0, -1.0, 0.25};
    const auto orig = s;
    add_awgn(s, 1e-30, 3);
    for (std::size_t i = 0; i < s.size(); ++i)
      CHECK(std::abs(s[i] - orig[i]) < 1e-10);
  }

  SUBCASE("variance n0/2") {
    const int n = 1000000;
    std::vector<double> s(n, 0.0);
    add_awgn(s, 2.0, 5);
    double sq = 0.0;
    for (const double v : s) sq += v * v;
    const double var = sq / n;
    // chi-square 3 sigma bound on the sample variance
    CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / n));
  }

  SUBCASE("deterministic per seed") {
    std::vector<double> a(64, 0.0), b(64, 0.0);
    add_awgn(a, 1.0, 11);
    add_awgn(b, 1.0, 11);
    CHECK(a == b);
  }

  SUBCASE("rejects bad n0") {
    std::vector<double> s{0.0};
    CHECK_THROWS_AS(add_awgn(s, 0.0, 1), std::invalid_argument);
  }
}

TEST_CASE("channel_llr") {
  // y = +sqrt(ec), ec = 1, n0 = 2 -> LLR = -2
  const std::vector<double> y{1.0};
  CHECK(channel_llr(y, 1.0, 2.0)[0] == doctest::Approx(-2.0).epsilon(1e-12));

  const std::vector<double> zero{0.0};
  CHECK(channel_llr(zero, 1.0, 2.0)[0] == 0.0);

  // all-zero word at high SNR: strongly positive LLRs
  std::vector<std::uint8_t> bits(64, 0);
  auto s = modulate(bits, 1.0);
  add_awgn(s, 0.01, 7);
  const auto llr = channel_llr(s, 1.0, 0.01);
  for (const double v : llr) CHECK(v > 100.0);
}

TEST_CASE("channel LLR density consistency") {
  // all-zero transmission: mean 4 ec / n0, variance 8 ec / n0
  const double ec = 1.0, n0 = 1.25;
  const int n = 1000000;
  std::vector<std::uint8_t> bits(n, 0);
  auto s = modulate(bits, ec);
  add_awgn(s, n0, 19);
  const auto llr = channel_llr(s, ec, n0);
  double sum = 0.0, sq = 0.0;
  for (const double v : llr) sum += v;
  const double mean = sum / n;
  for (const double v : llr) sq += (v - mean) * (v - mean);
  const double var = sq / n;
  const double expect_mean = 4.0 * ec / n0;
  const double expect_var = 8.0 * ec / n0;
  CHECK(std::abs(mean - expect_mean) < 3.0 * std::sqrt(expect_var / n));
  CHECK(std::abs(var - expect_var) < 3.0 * expect_var * std::sqrt(2.0 / n));

  // the same numbers through the SNR convention: mu_ch = 2 gamma
  const ChannelConfig cfg(ec, n0);
  CHECK(expect_mean == doctest::Approx(2.0 * cfg.gamma()).epsilon(1e-12));
}

TEST_CASE("channel config") {
  CHECK_THROWS_AS(ChannelConfig(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ChannelConfig(1.0, -1.0), std::invalid_argument);
  const auto cfg = ChannelConfig::from_snr(0.8);
  CHECK(cfg.gamma() == doctest::Approx(0.8).epsilon(1e-12));
}
