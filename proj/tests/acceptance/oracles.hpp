#pragma once

// Independent reference implementations used only to cross-check the library
// in the acceptance suite: a bit-by-bit shift-register encoder, exhaustive
// MAP marginalizers, a literal subset enumeration of the region constraints,
// and a linear-domain evaluation of the connection rule.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "corrma/conv_codec.hpp"
#include "corrma/ldpc_codec.hpp"
#include "corrma/llr.hpp"
#include "corrma/region.hpp"

namespace acceptance {

struct RefFilter {
  std::vector<std::vector<int>> nums;
  std::vector<int> den;
  int memory;

  explicit RefFilter(const corrma::RationalGenerator& g) {
    memory = static_cast<int>(g.denominator.size()) - 1;
    for (const auto& num : g.numerators)
      memory = std::max(memory, static_cast<int>(num.size()) - 1);
    den.assign(memory + 1, 0);
    for (std::size_t i = 0; i < g.denominator.size(); ++i)
      den[i] = g.denominator[i];
    for (const auto& num : g.numerators) {
      std::vector<int> padded(memory + 1, 0);
      for (std::size_t i = 0; i < num.size(); ++i) padded[i] = num[i];
      nums.push_back(padded);
    }
  }

  std::vector<std::uint8_t> run(std::span<const std::uint8_t> info,
                                bool terminate) const {
    std::vector<int> reg(memory, 0);
    std::vector<std::uint8_t> out;
    auto step = [&](int w) {
      for (const auto& num : nums) {
        int y = num[0] & w;
        for (int i = 1; i <= memory; ++i) y ^= num[i] & reg[i - 1];
        out.push_back(static_cast<std::uint8_t>(y));
      }
      for (int i = memory - 1; i > 0; --i) reg[i] = reg[i - 1];
      if (memory > 0) reg[0] = w;
    };
    for (const auto u : info) {
      int fb = 0;
      for (int i = 1; i <= memory; ++i) fb ^= den[i] & reg[i - 1];
      step(u ^ fb);
    }
    if (terminate)
      for (int t = 0; t < memory; ++t) step(0);
    return out;
  }
};

inline std::vector<double> conv_map_oracle(const RefFilter& ref,
                                           const std::vector<double>& coded_llrs,
                                           const std::vector<double>& apriori,
                                           bool terminated) {
  const int L = static_cast<int>(apriori.size());
  std::vector<double> num(L, corrma::kNegInf), den(L, corrma::kNegInf);
  for (unsigned mask = 0; mask < (1u << L); ++mask) {
    std::vector<std::uint8_t> info(L);
    for (int t = 0; t < L; ++t) info[t] = (mask >> t) & 1u;
    const auto coded = ref.run(info, terminated);
    double logw = 0.0;
    for (int t = 0; t < L; ++t)
      if (info[t] == 0) logw += apriori[t];
    for (std::size_t i = 0; i < coded.size(); ++i)
      if (coded[i] == 0) logw += coded_llrs[i];
    for (int t = 0; t < L; ++t) {
      if (info[t] == 0)
        num[t] = corrma::max_star(num[t], logw);
      else
        den[t] = corrma::max_star(den[t], logw);
    }
  }
  std::vector<double> out(L);
  for (int t = 0; t < L; ++t) out[t] = num[t] - den[t];
  return out;
}

inline std::vector<double> ldpc_map_oracle(const corrma::LdpcCode& code,
                                           const std::vector<double>& chllr,
                                           const std::vector<double>& apriori) {
  const int L = code.info_len();
  std::vector<double> num(L, corrma::kNegInf), den(L, corrma::kNegInf);
  for (unsigned mask = 0; mask < (1u << L); ++mask) {
    std::vector<std::uint8_t> info(L);
    for (int j = 0; j < L; ++j) info[j] = (mask >> j) & 1u;
    const auto word = code.encode(info);
    double logw = 0.0;
    for (int i = 0; i < code.block_len(); ++i)
      if (word[i] == 0) logw += chllr[i];
    for (int j = 0; j < L; ++j)
      if (info[j] == 0) logw += apriori[j];
    for (int j = 0; j < L; ++j) {
      if (info[j] == 0)
        num[j] = corrma::max_star(num[j], logw);
      else
        den[j] = corrma::max_star(den[j], logw);
    }
  }
  std::vector<double> out(L);
  for (int j = 0; j < L; ++j) out[j] = num[j] - den[j];
  return out;
}

inline bool feasible_oracle(const std::vector<double>& lambdas,
                            const std::vector<double>& entropies, double rate) {
  const int n = static_cast<int>(lambdas.size());
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    double sum = 0.0;
    int p = 0;
    for (int k = 0; k < n; ++k)
      if (mask & (1u << k)) {
        sum += lambdas[k];
        ++p;
      }
    if (sum < rate * (entropies[n] - entropies[n - p])) return false;
  }
  return true;
}

inline double connection_oracle(int n, double rho,
                                const std::vector<double>& in) {
  const int m = n - 1;
  const double q = 1.0 - rho;
  double num = 0.0, den = 0.0;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    double prob = 1.0;
    int zeros = 0;
    for (int k = 0; k < m; ++k) {
      const double p0 = 1.0 / (1.0 + std::exp(-in[k]));
      if (mask & (1u << k)) {
        prob *= 1.0 - p0;
      } else {
        prob *= p0;
        ++zeros;
      }
    }
    num += (std::pow(rho, zeros + 1) * std::pow(q, m - zeros) +
            std::pow(rho, m - zeros) * std::pow(q, zeros + 1)) *
           prob;
    den += (std::pow(rho, zeros) * std::pow(q, n - zeros) +
            std::pow(rho, n - zeros) * std::pow(q, zeros)) *
           prob;
  }
  return std::log(num / den);
}

}  // namespace acceptance
