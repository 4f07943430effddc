#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "corrma/conv_codec.hpp"
#include "corrma/ldpc_codec.hpp"
#include "corrma/llr.hpp"

namespace corrma {

// Uniform view of a component code for the joint decoder and the density
// analysis: encode info bits, decode channel LLRs with external apriori on
// the information bits, fixed internal iteration count.
class CodecAdapter {
 public:
  virtual ~CodecAdapter() = default;

  virtual std::string name() const = 0;
  virtual int info_len() const = 0;
  virtual int codeword_len() const = 0;
  double rate() const {
    return static_cast<double>(info_len()) / codeword_len();
  }

  virtual std::vector<std::uint8_t> encode(
      std::span<const std::uint8_t> info) const = 0;

  struct Decoded {
    LlrBlock posterior_info;
    LlrBlock extrinsic_info;
  };
  virtual Decoded decode(std::span<const double> channel_llrs,
                         std::span<const double> apriori_info) const = 0;
};

class ScccAdapter final : public CodecAdapter {
 public:
  ScccAdapter(ScccCode code, int internal_iters = 10)
      : code_(std::move(code)), internal_iters_(internal_iters) {}

  std::string name() const override { return "sccc"; }
  int info_len() const override { return code_.info_len; }
  int codeword_len() const override { return code_.codeword_len; }
  const ScccCode& code() const { return code_; }

  std::vector<std::uint8_t> encode(
      std::span<const std::uint8_t> info) const override {
    return code_.encode(info);
  }

  Decoded decode(std::span<const double> channel_llrs,
                 std::span<const double> apriori_info) const override {
    auto r = code_.decode(channel_llrs, apriori_info, internal_iters_);
    return {std::move(r.posterior_info), std::move(r.extrinsic_info)};
  }

 private:
  ScccCode code_;
  int internal_iters_;
};

class LdpcAdapter final : public CodecAdapter {
 public:
  // Early exit on a zero syndrome is fine for BER runs but must be off for
  // density measurements (fixed iteration count).
  LdpcAdapter(LdpcCode code, int iters = 50, bool allow_early_exit = true)
      : code_(std::move(code)),
        iters_(iters),
        allow_early_exit_(allow_early_exit) {}

  std::string name() const override { return "ldpc"; }
  int info_len() const override { return code_.info_len(); }
  int codeword_len() const override { return code_.block_len(); }
  const LdpcCode& code() const { return code_; }

  std::vector<std::uint8_t> encode(
      std::span<const std::uint8_t> info) const override {
    return code_.encode(info);
  }

  Decoded decode(std::span<const double> channel_llrs,
                 std::span<const double> apriori_info) const override {
    auto r = code_.decode(channel_llrs, apriori_info, iters_, allow_early_exit_);
    return {std::move(r.posterior_info), std::move(r.extrinsic_info)};
  }

 private:
  LdpcCode code_;
  int iters_;
  bool allow_early_exit_;
};

}  // namespace corrma
