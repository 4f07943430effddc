#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "corrma/llr.hpp"

namespace corrma {

// Rational GF(2) generator set with a common denominator. Coefficient lists
// are LSB first (index i is the coefficient of D^i); the denominator's
// constant term must be 1 so the recursive filter is realizable.
struct RationalGenerator {
  std::vector<std::vector<std::uint8_t>> numerators;
  std::vector<std::uint8_t> denominator;
};

// Recursive convolutional code in controller canonical form: one input, one
// output per numerator. The state holds the last `memory` feedback values.
class ConvCode {
 public:
  explicit ConvCode(const RationalGenerator& gen);

  int memory() const { return memory_; }
  int num_outputs() const { return n_out_; }
  int num_states() const { return 1 << memory_; }

  int next_state(int state, int input) const {
    return next_state_[2 * state + input];
  }
  unsigned output_bits(int state, int input) const {
    return out_bits_[2 * state + input];
  }
  // input that drives the feedback value to zero (one termination step)
  int termination_input(int state) const { return term_input_[state]; }

  // Output has num_outputs() bits per trellis step; termination appends
  // memory() forced steps driving the state to zero.
  std::vector<std::uint8_t> encode(std::span<const std::uint8_t> info,
                                   bool terminate) const;

  struct BcjrResult {
    LlrBlock posterior_info;   // one per free info step
    LlrBlock extrinsic_info;   // posterior - apriori
    LlrBlock extrinsic_coded;  // per coded bit (tail steps included)
  };

  // Exact symbol-MAP (log-domain BCJR). coded_llrs covers the whole trellis,
  // info_apriori only the free steps; when `terminated`, the trellis has
  // memory() extra tail steps with forced inputs and ends in state zero.
  BcjrResult bcjr_decode(std::span<const double> coded_llrs,
                         std::span<const double> info_apriori,
                         bool terminated) const;

  std::string polynomial_octal() const;  // "num,.../den" in octal

 private:
  int memory_ = 0;
  int n_out_ = 0;
  std::vector<int> next_state_;
  std::vector<unsigned> out_bits_;
  std::vector<int> term_input_;
  std::vector<unsigned> num_masks_;  // packed numerator coefficients
  unsigned den_mask_ = 0;
};

// Rate-1/2 serial concatenation: outer recursive non-systematic rate-1/2
// code, bit interleaver, inner recursive rate-1 code. The outer code is
// terminated (2 tail steps), the inner one is not, so the codeword length is
// N = 2 (L + 2).
struct ScccCode {
  ConvCode outer_code;
  ConvCode inner_code;
  std::vector<int> interleaver;  // inner input j carries outer coded bit interleaver[j]
  int info_len = 0;
  int codeword_len = 0;
  std::uint64_t interleaver_seed = 0;

  // Generators: outer [ (1+D^2)/(1+D+D^2), 1/(1+D+D^2) ],
  //             inner (1+D^2)/(1+D+D^2+D^3).
  static ScccCode make(int info_len, std::uint64_t interleaver_seed);

  double rate() const {
    return static_cast<double>(info_len) / codeword_len;
  }

  std::vector<std::uint8_t> encode(std::span<const std::uint8_t> info) const;

  struct DecodeResult {
    LlrBlock posterior_info;
    LlrBlock extrinsic_info;  // relative to the external apriori
  };

  // Serial turbo schedule starting from the inner decoder (the only one that
  // sees the channel). External apriori enters the outer decoder's info bits
  // and stays fixed across internal iterations.
  DecodeResult decode(std::span<const double> channel_llrs,
                      std::span<const double> apriori_info,
                      int internal_iters) const;

  std::string description() const;
};

}  // namespace corrma
