#include "corrma/conv_codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "corrma/rng.hpp"

namespace corrma {

namespace {

unsigned pack_coeffs(const std::vector<std::uint8_t>& coeffs) {
  unsigned mask = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] > 1)
      throw std::invalid_argument("RationalGenerator: coefficients must be 0/1");
    if (coeffs[i]) mask |= 1u << i;
  }
  return mask;
}

int parity(unsigned v) { return std::popcount(v) & 1; }

}  // namespace

ConvCode::ConvCode(const RationalGenerator& gen) {
  if (gen.numerators.empty())
    throw std::invalid_argument("ConvCode: at least one numerator required");
  if (gen.denominator.empty() || gen.denominator[0] != 1)
    throw std::invalid_argument(
        "ConvCode: denominator constant term must be 1");

  std::size_t deg = gen.denominator.size();
  for (const auto& num : gen.numerators) deg = std::max(deg, num.size());
  memory_ = static_cast<int>(deg) - 1;
  if (memory_ < 1 || memory_ > 16)
    throw std::invalid_argument("ConvCode: memory out of supported range");
  n_out_ = static_cast<int>(gen.numerators.size());

  den_mask_ = pack_coeffs(gen.denominator);
  for (const auto& num : gen.numerators) num_masks_.push_back(pack_coeffs(num));

  // State bit j holds the feedback value from j+1 steps ago; new feedback
  // w = input xor sum(den_i * w_{t-i}), outputs y = sum(num_i * w_{t-i})
  // including the fresh w at i = 0.
  const int states = num_states();
  next_state_.resize(2 * states);
  out_bits_.resize(2 * states);
  term_input_.resize(states);
  const unsigned state_mask = states - 1;
  for (int s = 0; s < states; ++s) {
    const int fb = parity((den_mask_ >> 1) & static_cast<unsigned>(s));
    term_input_[s] = fb;  // makes w = 0
    for (int u = 0; u <= 1; ++u) {
      const int w = u ^ fb;
      const unsigned window = (static_cast<unsigned>(s) << 1) | static_cast<unsigned>(w);
      unsigned bits = 0;
      for (int j = 0; j < n_out_; ++j)
        bits |= static_cast<unsigned>(parity(num_masks_[j] & window)) << j;
      next_state_[2 * s + u] = static_cast<int>(window & state_mask);
      out_bits_[2 * s + u] = bits;
    }
  }
}

std::vector<std::uint8_t> ConvCode::encode(std::span<const std::uint8_t> info,
                                           bool terminate) const {
  if (info.empty()) throw std::invalid_argument("encode: empty input");
  const int tail = terminate ? memory_ : 0;
  std::vector<std::uint8_t> out;
  out.reserve((info.size() + tail) * n_out_);
  int state = 0;
  auto step = [&](int u) {
    const unsigned bits = output_bits(state, u);
    for (int j = 0; j < n_out_; ++j)
      out.push_back(static_cast<std::uint8_t>((bits >> j) & 1u));
    state = next_state(state, u);
  };
  for (const auto b : info) {
    if (b > 1) throw std::invalid_argument("encode: entries must be 0 or 1");
    step(b);
  }
  for (int t = 0; t < tail; ++t) step(termination_input(state));
  return out;
}

ConvCode::BcjrResult ConvCode::bcjr_decode(std::span<const double> coded_llrs,
                                           std::span<const double> info_apriori,
                                           bool terminated) const {
  const int r = n_out_;
  const int free_steps = static_cast<int>(info_apriori.size());
  const int total = free_steps + (terminated ? memory_ : 0);
  if (total <= 0 || static_cast<int>(coded_llrs.size()) != total * r)
    throw std::invalid_argument("bcjr_decode: length mismatch");

  const int S = num_states();

  // Branch metric in the half-LLR form: constants common to both bit
  // hypotheses cancel in every output LLR.
  auto branch_metric = [&](int t, int s, int u) {
    double g = 0.0;
    if (t < free_steps) g += (u ? -0.5 : 0.5) * info_apriori[t];
    const unsigned bits = output_bits(s, u);
    for (int j = 0; j < r; ++j) {
      const double l = coded_llrs[t * r + j];
      g += ((bits >> j) & 1u) ? -0.5 * l : 0.5 * l;
    }
    return g;
  };

  std::vector<double> alpha(static_cast<std::size_t>(total + 1) * S, kNegInf);
  std::vector<double> beta(static_cast<std::size_t>(total + 1) * S, kNegInf);
  alpha[0] = 0.0;

  for (int t = 0; t < total; ++t) {
    double* a = &alpha[static_cast<std::size_t>(t) * S];
    double* an = &alpha[static_cast<std::size_t>(t + 1) * S];
    for (int s = 0; s < S; ++s) {
      if (a[s] == kNegInf) continue;
      const bool tail = t >= free_steps;
      for (int u = 0; u <= 1; ++u) {
        if (tail && u != termination_input(s)) continue;
        const int ns = next_state(s, u);
        an[ns] = max_star(an[ns], a[s] + branch_metric(t, s, u));
      }
    }
    double m = kNegInf;
    for (int s = 0; s < S; ++s) m = std::max(m, an[s]);
    for (int s = 0; s < S; ++s)
      if (an[s] != kNegInf) an[s] -= m;
  }

  if (terminated) {
    beta[static_cast<std::size_t>(total) * S] = 0.0;
  } else {
    for (int s = 0; s < S; ++s) beta[static_cast<std::size_t>(total) * S + s] = 0.0;
  }
  for (int t = total - 1; t >= 0; --t) {
    const double* bn = &beta[static_cast<std::size_t>(t + 1) * S];
    double* b = &beta[static_cast<std::size_t>(t) * S];
    const bool tail = t >= free_steps;
    for (int s = 0; s < S; ++s) {
      for (int u = 0; u <= 1; ++u) {
        if (tail && u != termination_input(s)) continue;
        const int ns = next_state(s, u);
        if (bn[ns] == kNegInf) continue;
        b[s] = max_star(b[s], bn[ns] + branch_metric(t, s, u));
      }
    }
    double m = kNegInf;
    for (int s = 0; s < S; ++s) m = std::max(m, b[s]);
    for (int s = 0; s < S; ++s)
      if (b[s] != kNegInf) b[s] -= m;
  }

  BcjrResult res;
  res.posterior_info.resize(free_steps);
  res.extrinsic_info.resize(free_steps);
  res.extrinsic_coded.resize(static_cast<std::size_t>(total) * r);

  std::vector<double> num_coded(r), den_coded(r);
  for (int t = 0; t < total; ++t) {
    const double* a = &alpha[static_cast<std::size_t>(t) * S];
    const double* bn = &beta[static_cast<std::size_t>(t + 1) * S];
    const bool tail = t >= free_steps;
    double num_info = kNegInf, den_info = kNegInf;
    std::fill(num_coded.begin(), num_coded.end(), kNegInf);
    std::fill(den_coded.begin(), den_coded.end(), kNegInf);
    for (int s = 0; s < S; ++s) {
      if (a[s] == kNegInf) continue;
      for (int u = 0; u <= 1; ++u) {
        if (tail && u != termination_input(s)) continue;
        const int ns = next_state(s, u);
        if (bn[ns] == kNegInf) continue;
        const double v = a[s] + branch_metric(t, s, u) + bn[ns];
        (u ? den_info : num_info) = max_star(u ? den_info : num_info, v);
        const unsigned bits = output_bits(s, u);
        for (int j = 0; j < r; ++j) {
          if ((bits >> j) & 1u)
            den_coded[j] = max_star(den_coded[j], v);
          else
            num_coded[j] = max_star(num_coded[j], v);
        }
      }
    }
    if (!tail) {
      const double post = num_info - den_info;
      res.posterior_info[t] = post;
      res.extrinsic_info[t] = post - info_apriori[t];
    }
    for (int j = 0; j < r; ++j) {
      // A coded bit can be structurally fixed at a tail step; +-inf posteriors
      // are mapped to the clip bound by the caller.
      const double post = num_coded[j] - den_coded[j];
      res.extrinsic_coded[t * r + j] = post - coded_llrs[t * r + j];
    }
  }
  return res;
}

std::string ConvCode::polynomial_octal() const {
  auto octal = [](unsigned mask) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%o", mask);
    return std::string(buf);
  };
  std::string s;
  for (std::size_t j = 0; j < num_masks_.size(); ++j) {
    if (j) s += ",";
    s += octal(num_masks_[j]);
  }
  s += "/";
  s += octal(den_mask_);
  return s;
}

ScccCode ScccCode::make(int info_len, std::uint64_t interleaver_seed) {
  if (info_len < 1) throw std::invalid_argument("ScccCode: info_len must be >= 1");
  RationalGenerator outer;
  outer.numerators = {{1, 0, 1}, {1}};  // 1+D^2 and 1
  outer.denominator = {1, 1, 1};        // 1+D+D^2
  RationalGenerator inner;
  inner.numerators = {{1, 0, 1}};       // 1+D^2
  inner.denominator = {1, 1, 1, 1};     // 1+D+D^2+D^3

  ScccCode code{ConvCode(outer), ConvCode(inner), {}, info_len, 0,
                interleaver_seed};
  code.codeword_len = 2 * (info_len + code.outer_code.memory());

  code.interleaver.resize(code.codeword_len);
  for (int i = 0; i < code.codeword_len; ++i) code.interleaver[i] = i;
  Rng rng(interleaver_seed);
  for (int i = code.codeword_len - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(code.interleaver[i], code.interleaver[j]);
  }
  return code;
}

std::vector<std::uint8_t> ScccCode::encode(
    std::span<const std::uint8_t> info) const {
  if (static_cast<int>(info.size()) != info_len)
    throw std::invalid_argument("ScccCode::encode: wrong info length");
  const auto outer_out = outer_code.encode(info, /*terminate=*/true);
  std::vector<std::uint8_t> inner_in(codeword_len);
  for (int j = 0; j < codeword_len; ++j) inner_in[j] = outer_out[interleaver[j]];
  return inner_code.encode(inner_in, /*terminate=*/false);
}

ScccCode::DecodeResult ScccCode::decode(std::span<const double> channel_llrs,
                                        std::span<const double> apriori_info,
                                        int internal_iters) const {
  if (static_cast<int>(channel_llrs.size()) != codeword_len)
    throw std::invalid_argument("ScccCode::decode: wrong channel length");
  if (static_cast<int>(apriori_info.size()) != info_len)
    throw std::invalid_argument("ScccCode::decode: wrong apriori length");
  if (internal_iters < 1)
    throw std::invalid_argument("ScccCode::decode: internal_iters must be >= 1");

  LlrBlock ch(channel_llrs.begin(), channel_llrs.end());
  clip_block(ch);
  LlrBlock apriori(apriori_info.begin(), apriori_info.end());
  clip_block(apriori);

  LlrBlock outer_coded_ap(codeword_len, 0.0);  // apriori for inner inputs, outer order
  LlrBlock inner_ap(codeword_len);
  LlrBlock outer_coded_llr(codeword_len);
  ConvCode::BcjrResult outer_res;

  for (int it = 0; it < internal_iters; ++it) {
    for (int j = 0; j < codeword_len; ++j)
      inner_ap[j] = outer_coded_ap[interleaver[j]];
    const auto inner_res = inner_code.bcjr_decode(ch, inner_ap, /*terminated=*/false);
    for (int j = 0; j < codeword_len; ++j)
      outer_coded_llr[interleaver[j]] = clip_llr(inner_res.extrinsic_info[j]);
    outer_res = outer_code.bcjr_decode(outer_coded_llr, apriori, /*terminated=*/true);
    for (int j = 0; j < codeword_len; ++j)
      outer_coded_ap[j] = clip_llr(outer_res.extrinsic_coded[j]);
  }
  return {std::move(outer_res.posterior_info), std::move(outer_res.extrinsic_info)};
}

std::string ScccCode::description() const {
  std::string s = "sccc outer=" + outer_code.polynomial_octal() +
                  " inner=" + inner_code.polynomial_octal();
  s += " info_len=" + std::to_string(info_len);
  s += " codeword_len=" + std::to_string(codeword_len);
  s += " interleaver_seed=" + std::to_string(interleaver_seed);
  return s;
}

}  // namespace corrma
