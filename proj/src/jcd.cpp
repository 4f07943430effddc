#include "corrma/jcd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "corrma/channel.hpp"
#include "corrma/rng.hpp"
#include "corrma/source_model.hpp"

namespace corrma {

namespace {

double safe_log(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

}  // namespace

ConnectionNode::ConnectionNode(int n, double rho) : n_(n), rho_(rho) {
  if (n_ < 2) throw std::invalid_argument("ConnectionNode: n must be >= 2");
  if (n_ > 12)
    throw std::invalid_argument(
        "ConnectionNode: exact combining costs O(2^(n-1)) per bit; n > 12 is "
        "refused (a pairwise approximation exists in the literature but is "
        "out of scope)");
  if (!(rho_ >= 0.5 && rho_ <= 1.0))
    throw std::invalid_argument("ConnectionNode: rho must lie in [0.5, 1]");
  const double q = 1.0 - rho_;
  log_num_.resize(n_);
  log_den_.resize(n_);
  for (int z = 0; z <= n_ - 1; ++z) {
    // numerator weight: P(target bit = 0, neighbor class z)
    // denominator weight: P(target bit = 1, neighbor class z)
    const double wn = std::pow(rho_, z + 1) * std::pow(q, n_ - 1 - z) +
                      std::pow(rho_, n_ - 1 - z) * std::pow(q, z + 1);
    const double wd = std::pow(rho_, z) * std::pow(q, n_ - z) +
                      std::pow(rho_, n_ - z) * std::pow(q, z);
    log_num_[z] = safe_log(wn);
    log_den_[z] = safe_log(wd);
  }
}

double ConnectionNode::llr(std::span<const double> llr_in) const {
  const int m = n_ - 1;
  if (static_cast<int>(llr_in.size()) != m)
    throw std::invalid_argument("ConnectionNode::llr: expected n-1 inputs");

  double half[11];
  for (int k = 0; k < m; ++k) half[k] = 0.5 * clip_llr(llr_in[k]);

  // Enumerate neighbor configurations; the per-configuration probability in
  // the half-LLR form drops a factor common to numerator and denominator.
  double num = kNegInf, den = kNegInf;
  const unsigned configs = 1u << m;
  for (unsigned mask = 0; mask < configs; ++mask) {
    double s = 0.0;
    int zeros = 0;
    for (int k = 0; k < m; ++k) {
      if (mask & (1u << k)) {
        s -= half[k];  // neighbor bit 1
      } else {
        s += half[k];
        ++zeros;
      }
    }
    num = max_star(num, log_num_[zeros] + s);
    den = max_star(den, log_den_[zeros] + s);
  }
  if (num == kNegInf) return -kLlrClip;
  if (den == kNegInf) return kLlrClip;
  return num - den;
}

double ConnectionNode::saturation_bound() const {
  double max_num = kNegInf, min_den = kLlrClip * 4;
  for (int z = 0; z < n_; ++z) {
    max_num = std::max(max_num, log_num_[z]);
    if (log_den_[z] != kNegInf) min_den = std::min(min_den, log_den_[z]);
  }
  return max_num - min_den;
}

LlrBlock connection_block_serial(const ConnectionNode& node,
                                 const std::vector<const LlrBlock*>& others) {
  if (static_cast<int>(others.size()) != node.n() - 1)
    throw std::invalid_argument("connection_block: expected n-1 input blocks");
  const std::size_t len = others.empty() ? 0 : others[0]->size();
  for (const auto* blk : others)
    if (blk->size() != len)
      throw std::invalid_argument("connection_block: ragged input blocks");

  LlrBlock out(len);
  std::vector<double> column(others.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t k = 0; k < others.size(); ++k) column[k] = (*others[k])[i];
    out[i] = node.llr(column);
  }
  return out;
}

LlrBlock connection_block(const ConnectionNode& node,
                          const std::vector<const LlrBlock*>& others) {
  if (static_cast<int>(others.size()) != node.n() - 1)
    throw std::invalid_argument("connection_block: expected n-1 input blocks");
  const std::size_t len = others.empty() ? 0 : others[0]->size();
  for (const auto* blk : others)
    if (blk->size() != len)
      throw std::invalid_argument("connection_block: ragged input blocks");

  LlrBlock out(len);
  const std::ptrdiff_t slen = static_cast<std::ptrdiff_t>(len);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < slen; ++i) {
    double column[11];
    for (std::size_t k = 0; k < others.size(); ++k) column[k] = (*others[k])[i];
    out[i] = node.llr({column, others.size()});
  }
  return out;
}

LlrBlock connection_block(const ConnectionNode& node,
                          const std::vector<LlrBlock>& rows, int target) {
  if (static_cast<int>(rows.size()) != node.n())
    throw std::invalid_argument("connection_block: expected n rows");
  if (target < 0 || target >= node.n())
    throw std::invalid_argument("connection_block: bad target index");
  std::vector<const LlrBlock*> others;
  others.reserve(rows.size() - 1);
  for (int k = 0; k < static_cast<int>(rows.size()); ++k)
    if (k != target) others.push_back(&rows[k]);
  return connection_block(node, others);
}

void JcdConfig::validate() const {
  if (!codec) throw std::invalid_argument("JcdConfig: codec not set");
  if (n < 2) throw std::invalid_argument("JcdConfig: n must be >= 2");
  if (!(rho >= 0.5 && rho <= 1.0))
    throw std::invalid_argument("JcdConfig: rho must lie in [0.5, 1]");
  if (static_cast<int>(gammas.size()) != n)
    throw std::invalid_argument("JcdConfig: need one gamma per link");
  for (const double g : gammas)
    if (!(g > 0.0)) throw std::invalid_argument("JcdConfig: gammas must be > 0");
  if (external_iters < 1)
    throw std::invalid_argument("JcdConfig: external_iters must be >= 1");
  if (max_blocks < 1)
    throw std::invalid_argument("JcdConfig: max_blocks must be >= 1");
}

JointDecodeResult joint_decode_llr(const JcdConfig& config,
                                   const std::vector<LlrBlock>& channel_llrs) {
  config.validate();
  const int n = config.n;
  const int L = config.codec->info_len();
  const int N = config.codec->codeword_len();
  if (static_cast<int>(channel_llrs.size()) != n)
    throw std::invalid_argument("joint_decode: expected n channel blocks");
  for (const auto& blk : channel_llrs)
    if (static_cast<int>(blk.size()) != N)
      throw std::invalid_argument("joint_decode: wrong channel block length");

  const ConnectionNode node(n, config.rho);

  std::vector<LlrBlock> extrinsic(n, LlrBlock(L, 0.0));
  JointDecodeResult res;
  res.posteriors.assign(n, LlrBlock(L, 0.0));
  res.bits = BitMatrix(n, L);

  BitMatrix prev = res.bits;
  for (int round = 1; round <= config.external_iters; ++round) {
    res.external_rounds = round;
    for (int k = 0; k < n; ++k) {
      const LlrBlock apriori = connection_block(node, extrinsic, k);
      auto dec = config.codec->decode(channel_llrs[k], apriori);
      LlrBlock ext = std::move(dec.extrinsic_info);
      clip_block(ext);
      extrinsic[k] = std::move(ext);
      res.posteriors[k] = std::move(dec.posterior_info);
    }
    long changed = 0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < L; ++j) {
        const std::uint8_t bit = res.posteriors[k][j] >= 0.0 ? 0 : 1;
        changed += bit != prev.at(k, j);
        res.bits.at(k, j) = bit;
      }
    res.round_changes.push_back(changed);
    if (config.early_exit && round > 1 && changed == 0) break;
    prev = res.bits;
  }
  return res;
}

JointDecodeResult joint_decode(const JcdConfig& config,
                               const std::vector<std::vector<double>>& observations) {
  config.validate();
  std::vector<LlrBlock> llrs(observations.size());
  for (std::size_t k = 0; k < observations.size(); ++k) {
    const auto cfg = ChannelConfig::from_snr(config.gammas.at(k));
    llrs[k] = channel_llr(observations[k], cfg.ec, cfg.n0);
  }
  return joint_decode_llr(config, llrs);
}

namespace {

struct BlockCounts {
  std::vector<long> errors;
};

BlockCounts run_one_block(const JcdConfig& config,
                          const std::vector<double>& gammas, long block_index) {
  const int n = config.n;
  const int L = config.codec->info_len();

  const std::uint64_t base = mix_seed(config.seed, static_cast<std::uint64_t>(block_index));
  const CorrelationModel model(n, config.rho);
  const SourceBlock source = generate_block(model, L, mix_seed(base, 0));

  std::vector<LlrBlock> llrs(n);
  std::vector<std::uint8_t> info(L);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < L; ++j) info[j] = source.at(k, j);
    const auto cfg = ChannelConfig::from_snr(gammas[k]);
    auto signal = modulate(config.codec->encode(info), cfg.ec);
    add_awgn(signal, cfg.n0, mix_seed(base, 1 + static_cast<std::uint64_t>(k)));
    llrs[k] = channel_llr(signal, cfg.ec, cfg.n0);
  }

  JcdConfig cfg = config;
  cfg.gammas = gammas;
  const auto decoded = joint_decode_llr(cfg, llrs);

  BlockCounts counts;
  counts.errors.assign(n, 0);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < L; ++j)
      counts.errors[k] += decoded.bits.at(k, j) != source.at(k, j);
  return counts;
}

}  // namespace

std::vector<BerPoint> simulate_ber(
    const JcdConfig& config, const std::vector<std::vector<double>>& snr_grid) {
  config.validate();
  const int n = config.n;
  const int L = config.codec->info_len();

  std::vector<BerPoint> out;
  for (std::size_t g = 0; g < snr_grid.size(); ++g) {
    const auto& gammas = snr_grid[g];
    if (static_cast<int>(gammas.size()) != n)
      throw std::invalid_argument("simulate_ber: grid row length must be n");

    std::vector<long> errors(n, 0);
    long blocks = 0;
    const int wave = 8;
    while (blocks < config.max_blocks) {
      const int batch = static_cast<int>(
          std::min<long>(wave, config.max_blocks - blocks));
      std::vector<BlockCounts> partial(batch);
#pragma omp parallel for schedule(dynamic)
      for (int b = 0; b < batch; ++b) {
        const long index = static_cast<long>(g) * 1000003L + blocks + b;
        partial[b] = run_one_block(config, gammas, index);
      }
      for (int b = 0; b < batch; ++b)
        for (int k = 0; k < n; ++k) errors[k] += partial[b].errors[k];
      blocks += batch;
      long total = 0;
      for (const long e : errors) total += e;
      if (total >= config.target_errors) break;
    }

    for (int k = 0; k < n; ++k) {
      BerPoint p;
      p.gammas = gammas;
      p.source = k;
      p.blocks = blocks;
      p.errors = errors[k];
      p.bits = blocks * static_cast<long>(L);
      p.ber = p.bits > 0 ? static_cast<double>(p.errors) / p.bits : 0.0;
      p.ci95 = p.bits > 0
                   ? 1.96 * std::sqrt(std::max(p.ber * (1.0 - p.ber), 0.0) /
                                      static_cast<double>(p.bits))
                   : 0.0;
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace corrma
