#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "corrma/bit_matrix.hpp"
#include "corrma/codec_adapter.hpp"
#include "corrma/llr.hpp"

namespace corrma {

// Factor node coupling the n component decoders: maps the n-1 incoming
// extrinsic LLRs about the other sources' bits to an a-priori LLR for the
// remaining one, by exact marginalization over the 2^(n-1) neighbor
// configurations under the common-bit/BSC correlation model. Cost is
// O(2^(n-1)) per bit, so n above 12 is refused; the pairwise approximation
// from the literature is out of scope here.
class ConnectionNode {
 public:
  ConnectionNode(int n, double rho);

  int n() const { return n_; }
  double rho() const { return rho_; }

  // llr_in has n-1 entries, clipped to +-50 on entry.
  double llr(std::span<const double> llr_in) const;

  // largest possible |output|, reached when all inputs saturate
  double saturation_bound() const;

 private:
  int n_;
  double rho_;
  // per-class log weights, index = number of zeros among the n-1 neighbors
  std::vector<double> log_num_;
  std::vector<double> log_den_;
};

// Columnwise application over a block: others[k] are the latest extrinsic
// LLR blocks of the n-1 other decoders. The OpenMP version and the serial
// reference produce bit-identical results.
LlrBlock connection_block(const ConnectionNode& node,
                          const std::vector<const LlrBlock*>& others);
LlrBlock connection_block_serial(const ConnectionNode& node,
                                 const std::vector<const LlrBlock*>& others);

// Convenience overload matching the all-sources layout: rows is n blocks,
// target selects the decoder that receives the output.
LlrBlock connection_block(const ConnectionNode& node,
                          const std::vector<LlrBlock>& rows, int target);

struct JcdConfig {
  int n = 2;
  double rho = 0.95;
  std::shared_ptr<const CodecAdapter> codec;  // identical code at each source
  std::vector<double> gammas;                 // per-link SNR (2 ec / n0)
  int external_iters = 5;
  bool early_exit = true;  // stop when hard decisions are stable
  int max_blocks = 100;
  long target_errors = 100;
  std::uint64_t seed = 1;

  void validate() const;
};

struct JointDecodeResult {
  BitMatrix bits;                    // n x L hard decisions (LLR >= 0 -> 0)
  std::vector<LlrBlock> posteriors;  // per source
  int external_rounds = 0;
  // hard decisions changed per external round (round 1 counts against the
  // all-zero start); early exit fires when a round changes nothing
  std::vector<long> round_changes;
};

// Serial schedule: connection messages start at zero; each external round
// runs the decoders in index order, each consuming the other decoders'
// latest extrinsic info LLRs through the connection nodes.
JointDecodeResult joint_decode(const JcdConfig& config,
                               const std::vector<std::vector<double>>& observations);

// Same schedule on precomputed channel LLRs (one block per source).
JointDecodeResult joint_decode_llr(const JcdConfig& config,
                                   const std::vector<LlrBlock>& channel_llrs);

struct BerPoint {
  std::vector<double> gammas;
  int source = 0;
  double ber = 0.0;
  double ci95 = 0.0;  // 95% confidence half-width
  long blocks = 0;
  long errors = 0;
  long bits = 0;
};

// Monte Carlo bit error rate per source and grid point. Blocks are
// independent units with per-block RNG streams derived from (seed, block),
// run in waves so results do not depend on the thread count. Stops at
// target_errors total info-bit errors or max_blocks, whichever first.
std::vector<BerPoint> simulate_ber(
    const JcdConfig& config, const std::vector<std::vector<double>>& snr_grid);

}  // namespace corrma
