#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "corrma/llr.hpp"

namespace corrma {

// Edge-perspective degree distributions: entries are (degree, fraction of
// edges). A polynomial coefficient of x^(d-1) corresponds to degree d.
struct DegreeDistributions {
  std::vector<std::pair<int, double>> lambda_edge;  // variable nodes
  std::vector<std::pair<int, double>> rho_edge;     // check nodes

  void validate() const;  // fractions sum to 1 within 1e-6, degrees >= 1/2
  double design_rate() const;

  static DegreeDistributions irregular3();
  static DegreeDistributions regular(int var_degree, int check_degree);
};

// Systematic irregular LDPC code. Built by socket matching from the degree
// distributions, with double-edge removal, one 4-cycle reduction sweep, and
// GF(2) elimination that picks the systematic positions and the encoder
// table. H has full row rank after construction (rank-deficient draws are
// retried with a derived seed, then reported).
class LdpcCode {
 public:
  static LdpcCode build(const DegreeDistributions& dd, int block_len,
                        std::uint64_t seed);
  // Explicit parity-check rows (variable indices per check). Throws when the
  // rows are not GF(2)-independent.
  static LdpcCode from_parity(std::vector<std::vector<int>> check_rows,
                              int block_len);

  int block_len() const { return block_len_; }
  int info_len() const { return info_len_; }
  int num_checks() const { return static_cast<int>(checks_.size()); }
  double rate() const { return static_cast<double>(info_len_) / block_len_; }

  // column indices of the information positions, ascending
  const std::vector<int>& systematic_map() const { return systematic_; }
  const std::vector<std::vector<int>>& check_rows() const { return checks_; }

  std::vector<std::uint8_t> encode(std::span<const std::uint8_t> info) const;
  bool syndrome_ok(std::span<const std::uint8_t> word) const;

  struct DecodeResult {
    LlrBlock posterior_info;
    LlrBlock extrinsic_info;  // posterior - apriori at systematic positions
    std::vector<std::uint8_t> hard_word;  // full-length hard decision
    bool converged = false;
    int iterations = 0;
  };

  // Flooding sum-product with the exact tanh rule. External apriori enters
  // only at the systematic variable nodes; pass an empty span for none.
  // Early exit stops at the first zero-syndrome iteration (disable it for
  // density measurements, which need a fixed iteration count).
  DecodeResult decode(std::span<const double> channel_llrs,
                      std::span<const double> apriori_info, int iters,
                      bool allow_early_exit = true) const;

  // realized edge-perspective degree fractions (degree -> fraction)
  std::vector<std::pair<int, double>> variable_edge_fractions() const;
  std::vector<std::pair<int, double>> check_edge_fractions() const;
  long num_edges() const;

  void write_alist(std::ostream& os) const;
  static LdpcCode read_alist(std::istream& is);

 private:
  LdpcCode() = default;
  void finalize();  // GF(2) elimination: rank check, systematic_, encoder_

  int block_len_ = 0;
  int info_len_ = 0;
  std::vector<std::vector<int>> checks_;  // variable indices per check
  std::vector<std::vector<int>> vars_;    // check indices per variable
  std::vector<int> systematic_;           // info positions
  std::vector<int> parity_;               // pivot positions, one per check row
  // encoder_ row i: packed info-bit combination giving the parity bit at
  // parity_[i]
  std::vector<std::uint64_t> encoder_;
  int enc_words_ = 0;
};

}  // namespace corrma
