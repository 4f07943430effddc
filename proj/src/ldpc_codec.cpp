#include "corrma/ldpc_codec.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "corrma/rng.hpp"

namespace corrma {

namespace {

constexpr double kTanhClip = 1.0 - 1e-12;

// largest-remainder rounding of fractions * total to integer counts
std::vector<long> apportion(const std::vector<double>& fractions, long total) {
  std::vector<long> counts(fractions.size());
  std::vector<std::pair<double, std::size_t>> rema(fractions.size());
  long assigned = 0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double exact = fractions[i] * total;
    counts[i] = static_cast<long>(std::floor(exact));
    assigned += counts[i];
    rema[i] = {exact - counts[i], i};
  }
  std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (long k = 0; k < total - assigned; ++k) counts[rema[k].second]++;
  return counts;
}

}  // namespace

void DegreeDistributions::validate() const {
  auto check = [](const std::vector<std::pair<int, double>>& dist,
                  const char* what, int min_degree) {
    if (dist.empty()) throw std::invalid_argument(std::string(what) + ": empty");
    double sum = 0.0;
    for (const auto& [d, f] : dist) {
      if (d < min_degree)
        throw std::invalid_argument(std::string(what) + ": degree too small");
      if (f < 0.0)
        throw std::invalid_argument(std::string(what) + ": negative fraction");
      sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw std::invalid_argument(std::string(what) +
                                  ": fractions must sum to 1");
  };
  check(lambda_edge, "lambda_edge", 1);
  check(rho_edge, "rho_edge", 2);
}

double DegreeDistributions::design_rate() const {
  double vsum = 0.0, csum = 0.0;
  for (const auto& [d, f] : lambda_edge) vsum += f / d;
  for (const auto& [d, f] : rho_edge) csum += f / d;
  return 1.0 - csum / vsum;
}

DegreeDistributions DegreeDistributions::irregular3() {
  DegreeDistributions dd;
  dd.lambda_edge = {{2, 0.19606},  {3, 0.24039}, {6, 0.00228},
                    {7, 0.05516},  {8, 0.16602}, {9, 0.04088},
                    {10, 0.01064}, {28, 0.00221}, {30, 0.28636}};
  dd.rho_edge = {{8, 0.00749}, {9, 0.99101}, {10, 0.00150}};
  return dd;
}

DegreeDistributions DegreeDistributions::regular(int var_degree,
                                                 int check_degree) {
  DegreeDistributions dd;
  dd.lambda_edge = {{var_degree, 1.0}};
  dd.rho_edge = {{check_degree, 1.0}};
  return dd;
}

LdpcCode LdpcCode::build(const DegreeDistributions& dd, int block_len,
                         std::uint64_t seed) {
  dd.validate();
  if (block_len < 128 || block_len % 2 != 0)
    throw std::invalid_argument("LdpcCode::build: N must be even and >= 128");

  // node-perspective fractions
  double vnorm = 0.0, cnorm = 0.0;
  for (const auto& [d, f] : dd.lambda_edge) vnorm += f / d;
  for (const auto& [d, f] : dd.rho_edge) cnorm += f / d;
  std::vector<double> vfrac, cfrac;
  for (const auto& [d, f] : dd.lambda_edge) vfrac.push_back(f / d / vnorm);
  for (const auto& [d, f] : dd.rho_edge) cfrac.push_back(f / d / cnorm);

  auto vcounts = apportion(vfrac, block_len);
  long edges = 0;
  for (std::size_t i = 0; i < vcounts.size(); ++i)
    edges += vcounts[i] * dd.lambda_edge[i].first;

  const long num_checks =
      std::max<long>(1, std::lround(static_cast<double>(edges) * cnorm));
  auto ccounts = apportion(cfrac, num_checks);
  long check_sockets = 0;
  for (std::size_t i = 0; i < ccounts.size(); ++i)
    check_sockets += ccounts[i] * dd.rho_edge[i].first;

  // Reconcile the rounding residual between the two sides by single-variable
  // moves between adjacent degrees of the variable support, one move per
  // class pair per round, so no class drifts more than a couple of nodes
  // from its target count.
  long delta = check_sockets - edges;  // edges the variable side must gain
  for (int round = 0; round < 16 && delta != 0; ++round) {
    bool moved = false;
    for (std::size_t i = 0; i + 1 < vcounts.size() && delta != 0; ++i) {
      if (dd.lambda_edge[i + 1].first - dd.lambda_edge[i].first != 1) continue;
      if (delta > 0 && vcounts[i] > 0) {
        vcounts[i]--;
        vcounts[i + 1]++;
        --delta;
        moved = true;
        ++i;  // keep the round's moves on disjoint pairs
      } else if (delta < 0 && vcounts[i + 1] > 0) {
        vcounts[i + 1]--;
        vcounts[i]++;
        ++delta;
        moved = true;
        ++i;
      }
    }
    if (!moved) break;
  }
  std::vector<int> chk_deg;
  chk_deg.reserve(num_checks);
  for (std::size_t i = 0; i < ccounts.size(); ++i)
    for (long k = 0; k < ccounts[i]; ++k)
      chk_deg.push_back(dd.rho_edge[i].first);
  // fallback for supports with no adjacent variable degrees
  std::size_t idx = 0;
  while (delta < 0 && !chk_deg.empty()) {
    if (chk_deg[idx % chk_deg.size()] > 2) {
      chk_deg[idx % chk_deg.size()]--;
      ++delta;
    }
    ++idx;
  }
  while (delta > 0 && !chk_deg.empty()) {
    chk_deg[idx % chk_deg.size()]++;
    --delta;
    ++idx;
  }

  std::vector<int> var_deg;
  var_deg.reserve(block_len);
  for (std::size_t i = 0; i < vcounts.size(); ++i)
    for (long k = 0; k < vcounts[i]; ++k)
      var_deg.push_back(dd.lambda_edge[i].first);
  edges = 0;
  for (const int d : var_deg) edges += d;

  for (int attempt = 0; attempt < 8; ++attempt) {
    Rng rng(seed, static_cast<std::uint64_t>(attempt));

    std::vector<int> vsock, csock;
    vsock.reserve(edges);
    csock.reserve(edges);
    for (int v = 0; v < block_len; ++v)
      for (int k = 0; k < var_deg[v]; ++k) vsock.push_back(v);
    for (std::size_t c = 0; c < chk_deg.size(); ++c)
      for (int k = 0; k < chk_deg[c]; ++k) csock.push_back(static_cast<int>(c));
    for (long i = edges - 1; i > 0; --i) {
      const long j = static_cast<long>(rng.below(static_cast<std::uint64_t>(i) + 1));
      std::swap(vsock[i], vsock[j]);
    }

    // edge list with double-edge repair by socket swaps
    std::vector<std::pair<int, int>> edge_list(edges);
    std::map<std::pair<int, int>, int> count;
    std::vector<long> dups;
    for (long e = 0; e < edges; ++e) {
      edge_list[e] = {vsock[e], csock[e]};
      if (++count[edge_list[e]] > 1) dups.push_back(e);
    }
    auto resolve_duplicates = [&]() {
      long budget = 400 * static_cast<long>(dups.size()) + 4000;
      while (!dups.empty() && budget-- > 0) {
        const long e = dups.back();
        if (count[edge_list[e]] <= 1) {  // resolved by an earlier swap
          dups.pop_back();
          continue;
        }
        const long o = static_cast<long>(rng.below(static_cast<std::uint64_t>(edges)));
        if (o == e) continue;
        const auto [ve, ce] = edge_list[e];
        const auto [vo, co] = edge_list[o];
        if (ve == vo || ce == co) continue;
        const std::pair<int, int> a{ve, co}, b{vo, ce};
        if (count.count(a) && count[a] > 0) continue;
        if (count.count(b) && count[b] > 0) continue;
        count[edge_list[e]]--;
        count[edge_list[o]]--;
        edge_list[e] = a;
        edge_list[o] = b;
        count[a]++;
        count[b]++;
        dups.pop_back();
      }
      return dups.empty();
    };
    if (!resolve_duplicates()) continue;

    LdpcCode code;
    code.block_len_ = block_len;
    code.checks_.assign(chk_deg.size(), {});
    for (const auto& [v, c] : edge_list) code.checks_[c].push_back(v);

    // one 4-cycle reduction sweep: break one shared variable for every pair
    // of checks that overlaps in two or more variables
    {
      std::map<std::pair<int, int>, std::vector<int>> pair_vars;
      std::vector<std::vector<int>> var_checks(block_len);
      for (std::size_t c = 0; c < code.checks_.size(); ++c)
        for (const int v : code.checks_[c]) var_checks[v].push_back(static_cast<int>(c));
      for (int v = 0; v < block_len; ++v) {
        auto& cs = var_checks[v];
        std::sort(cs.begin(), cs.end());
        for (std::size_t i = 0; i < cs.size(); ++i)
          for (std::size_t j = i + 1; j < cs.size(); ++j)
            pair_vars[{cs[i], cs[j]}].push_back(v);
      }
      for (const auto& [pair, vs] : pair_vars) {
        if (vs.size() < 2) continue;
        // swap one end of the duplicated overlap into a random other check
        const int v = vs[1];
        const int c = pair.second;
        for (int tries = 0; tries < 64; ++tries) {
          const int c2 =
              static_cast<int>(rng.below(code.checks_.size()));
          if (c2 == pair.first || c2 == c) continue;
          auto& row2 = code.checks_[c2];
          const int pos2 = static_cast<int>(rng.below(row2.size()));
          const int v2 = row2[pos2];
          if (v2 == v) continue;
          auto& row = code.checks_[c];
          auto it = std::find(row.begin(), row.end(), v);
          if (it == row.end()) break;
          if (std::find(row.begin(), row.end(), v2) != row.end()) continue;
          if (std::find(row2.begin(), row2.end(), v) != row2.end()) continue;
          *it = v2;
          row2[pos2] = v;
          break;
        }
      }
    }

    try {
      code.finalize();
    } catch (const std::runtime_error&) {
      continue;  // rank deficient, retry with the next derived seed
    }
    return code;
  }
  throw std::runtime_error(
      "LdpcCode::build: construction failed after bounded retries "
      "(rank-deficient parity matrix)");
}

LdpcCode LdpcCode::from_parity(std::vector<std::vector<int>> check_rows,
                               int block_len) {
  LdpcCode code;
  code.block_len_ = block_len;
  for (auto& row : check_rows) {
    std::sort(row.begin(), row.end());
    if (!row.empty() && (row.front() < 0 || row.back() >= block_len))
      throw std::invalid_argument("from_parity: variable index out of range");
  }
  code.checks_ = std::move(check_rows);
  code.finalize();
  return code;
}

void LdpcCode::finalize() {
  const int M = static_cast<int>(checks_.size());
  const int N = block_len_;
  const int words = (N + 63) / 64;

  vars_.assign(N, {});
  for (int c = 0; c < M; ++c)
    for (const int v : checks_[c]) vars_[v].push_back(c);

  // dense copy for elimination
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(M) * words, 0);
  auto bit = [&](int r, int c) -> bool {
    return (rows[static_cast<std::size_t>(r) * words + c / 64] >> (c % 64)) & 1u;
  };
  for (int c = 0; c < M; ++c)
    for (const int v : checks_[c])
      rows[static_cast<std::size_t>(c) * words + v / 64] ^= 1ULL << (v % 64);

  std::vector<int> pivot_col;
  std::vector<char> is_pivot(N, 0);
  int rank = 0;
  for (int col = 0; col < N && rank < M; ++col) {
    int pr = -1;
    for (int r = rank; r < M; ++r)
      if (bit(r, col)) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    if (pr != rank)
      for (int w = 0; w < words; ++w)
        std::swap(rows[static_cast<std::size_t>(pr) * words + w],
                  rows[static_cast<std::size_t>(rank) * words + w]);
    for (int r = 0; r < M; ++r) {
      if (r == rank || !bit(r, col)) continue;
      const std::uint64_t* src = &rows[static_cast<std::size_t>(rank) * words];
      std::uint64_t* dst = &rows[static_cast<std::size_t>(r) * words];
      for (int w = 0; w < words; ++w) dst[w] ^= src[w];
    }
    pivot_col.push_back(col);
    is_pivot[col] = 1;
    ++rank;
  }
  if (rank < M)
    throw std::runtime_error("LdpcCode: parity matrix is rank deficient");

  parity_ = pivot_col;
  systematic_.clear();
  for (int col = 0; col < N; ++col)
    if (!is_pivot[col]) systematic_.push_back(col);
  info_len_ = static_cast<int>(systematic_.size());

  // encoder table: row i of the reduced matrix restricted to the systematic
  // columns gives the combination for the parity bit at parity_[i]
  enc_words_ = (info_len_ + 63) / 64;
  encoder_.assign(static_cast<std::size_t>(M) * enc_words_, 0);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < info_len_; ++j)
      if (bit(i, systematic_[j]))
        encoder_[static_cast<std::size_t>(i) * enc_words_ + j / 64] ^=
            1ULL << (j % 64);
}

std::vector<std::uint8_t> LdpcCode::encode(
    std::span<const std::uint8_t> info) const {
  if (static_cast<int>(info.size()) != info_len_)
    throw std::invalid_argument("LdpcCode::encode: wrong info length");
  std::vector<std::uint64_t> packed(enc_words_, 0);
  for (int j = 0; j < info_len_; ++j) {
    if (info[j] > 1)
      throw std::invalid_argument("LdpcCode::encode: entries must be 0 or 1");
    if (info[j]) packed[j / 64] ^= 1ULL << (j % 64);
  }
  std::vector<std::uint8_t> word(block_len_, 0);
  for (int j = 0; j < info_len_; ++j) word[systematic_[j]] = info[j];
  const int M = num_checks();
  for (int i = 0; i < M; ++i) {
    std::uint64_t acc = 0;
    const std::uint64_t* row = &encoder_[static_cast<std::size_t>(i) * enc_words_];
    for (int w = 0; w < enc_words_; ++w) acc ^= row[w] & packed[w];
    word[parity_[i]] =
        static_cast<std::uint8_t>(__builtin_popcountll(acc) & 1);
  }
  return word;
}

bool LdpcCode::syndrome_ok(std::span<const std::uint8_t> word) const {
  if (static_cast<int>(word.size()) != block_len_) return false;
  for (const auto& row : checks_) {
    int s = 0;
    for (const int v : row) s ^= word[v];
    if (s) return false;
  }
  return true;
}

LdpcCode::DecodeResult LdpcCode::decode(std::span<const double> channel_llrs,
                                        std::span<const double> apriori_info,
                                        int iters,
                                        bool allow_early_exit) const {
  if (static_cast<int>(channel_llrs.size()) != block_len_)
    throw std::invalid_argument("LdpcCode::decode: wrong channel length");
  if (!apriori_info.empty() &&
      static_cast<int>(apriori_info.size()) != info_len_)
    throw std::invalid_argument("LdpcCode::decode: wrong apriori length");
  if (iters < 1)
    throw std::invalid_argument("LdpcCode::decode: iters must be >= 1");

  // total intrinsic input per variable node: channel plus (at systematic
  // positions) the external apriori
  std::vector<double> intrinsic(channel_llrs.begin(), channel_llrs.end());
  for (double& v : intrinsic) v = clip_llr(v);
  if (!apriori_info.empty())
    for (int j = 0; j < info_len_; ++j)
      intrinsic[systematic_[j]] += clip_llr(apriori_info[j]);

  const int M = num_checks();
  std::vector<int> offset(M + 1, 0);
  for (int c = 0; c < M; ++c)
    offset[c + 1] = offset[c] + static_cast<int>(checks_[c].size());
  const int E = offset[M];

  std::vector<double> chk_msg(E, 0.0);   // check -> variable
  std::vector<double> post(block_len_);  // running posterior sums
  std::vector<double> tanh_buf, pre, suf;

  DecodeResult res;
  res.iterations = 0;

  auto compute_posteriors = [&]() {
    for (int v = 0; v < block_len_; ++v) post[v] = intrinsic[v];
    for (int c = 0; c < M; ++c)
      for (int e = offset[c], k = 0; e < offset[c + 1]; ++e, ++k)
        post[checks_[c][k]] += chk_msg[e];
  };

  for (int it = 1; it <= iters; ++it) {
    res.iterations = it;
    compute_posteriors();

    for (int c = 0; c < M; ++c) {
      const int deg = offset[c + 1] - offset[c];
      tanh_buf.resize(deg);
      pre.resize(deg + 1);
      suf.resize(deg + 1);
      for (int k = 0; k < deg; ++k) {
        const int v = checks_[c][k];
        const double in = clip_llr(post[v] - chk_msg[offset[c] + k]);
        tanh_buf[k] = std::tanh(0.5 * in);
      }
      pre[0] = 1.0;
      for (int k = 0; k < deg; ++k) pre[k + 1] = pre[k] * tanh_buf[k];
      suf[deg] = 1.0;
      for (int k = deg - 1; k >= 0; --k) suf[k] = suf[k + 1] * tanh_buf[k];
      for (int k = 0; k < deg; ++k) {
        double t = pre[k] * suf[k + 1];
        t = std::clamp(t, -kTanhClip, kTanhClip);
        chk_msg[offset[c] + k] = clip_llr(2.0 * std::atanh(t));
      }
    }

    compute_posteriors();
    bool all_ok = true;
    for (int c = 0; c < M && all_ok; ++c) {
      int s = 0;
      for (const int v : checks_[c]) s ^= (post[v] < 0.0);
      all_ok = (s == 0);
    }
    if (all_ok) {
      res.converged = true;
      if (allow_early_exit) break;
    }
  }

  compute_posteriors();
  res.posterior_info.resize(info_len_);
  res.extrinsic_info.resize(info_len_);
  res.hard_word.resize(block_len_);
  for (int v = 0; v < block_len_; ++v) res.hard_word[v] = post[v] < 0.0;
  for (int j = 0; j < info_len_; ++j) {
    const double ap =
        apriori_info.empty() ? 0.0 : clip_llr(apriori_info[j]);
    res.posterior_info[j] = post[systematic_[j]];
    res.extrinsic_info[j] = post[systematic_[j]] - ap;
  }
  return res;
}

std::vector<std::pair<int, double>> LdpcCode::variable_edge_fractions() const {
  std::map<int, long> hist;
  long total = 0;
  for (const auto& cs : vars_) {
    hist[static_cast<int>(cs.size())] += static_cast<long>(cs.size());
    total += static_cast<long>(cs.size());
  }
  std::vector<std::pair<int, double>> out;
  for (const auto& [d, e] : hist)
    out.emplace_back(d, static_cast<double>(e) / total);
  return out;
}

std::vector<std::pair<int, double>> LdpcCode::check_edge_fractions() const {
  std::map<int, long> hist;
  long total = 0;
  for (const auto& row : checks_) {
    hist[static_cast<int>(row.size())] += static_cast<long>(row.size());
    total += static_cast<long>(row.size());
  }
  std::vector<std::pair<int, double>> out;
  for (const auto& [d, e] : hist)
    out.emplace_back(d, static_cast<double>(e) / total);
  return out;
}

long LdpcCode::num_edges() const {
  long e = 0;
  for (const auto& row : checks_) e += static_cast<long>(row.size());
  return e;
}

void LdpcCode::write_alist(std::ostream& os) const {
  const int M = num_checks();
  std::size_t dvmax = 0, dcmax = 0;
  for (const auto& cs : vars_) dvmax = std::max(dvmax, cs.size());
  for (const auto& row : checks_) dcmax = std::max(dcmax, row.size());
  os << block_len_ << " " << M << "\n" << dvmax << " " << dcmax << "\n";
  for (int v = 0; v < block_len_; ++v)
    os << vars_[v].size() << (v + 1 < block_len_ ? " " : "\n");
  for (int c = 0; c < M; ++c)
    os << checks_[c].size() << (c + 1 < M ? " " : "\n");
  for (int v = 0; v < block_len_; ++v) {
    for (std::size_t k = 0; k < dvmax; ++k) {
      const long val = k < vars_[v].size() ? vars_[v][k] + 1 : 0;
      os << val << (k + 1 < dvmax ? " " : "\n");
    }
  }
  for (int c = 0; c < M; ++c) {
    for (std::size_t k = 0; k < dcmax; ++k) {
      const long val = k < checks_[c].size() ? checks_[c][k] + 1 : 0;
      os << val << (k + 1 < dcmax ? " " : "\n");
    }
  }
}

LdpcCode LdpcCode::read_alist(std::istream& is) {
  int n = 0, m = 0, dvmax = 0, dcmax = 0;
  if (!(is >> n >> m >> dvmax >> dcmax) || n <= 0 || m <= 0)
    throw std::invalid_argument("read_alist: bad header");
  std::vector<int> vdeg(n), cdeg(m);
  for (auto& d : vdeg) is >> d;
  for (auto& d : cdeg) is >> d;
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < dvmax; ++k) {
      int dummy;
      is >> dummy;
    }
  std::vector<std::vector<int>> checks(m);
  for (int c = 0; c < m; ++c) {
    for (int k = 0; k < dcmax; ++k) {
      int v;
      if (!(is >> v)) throw std::invalid_argument("read_alist: truncated");
      if (v > 0) checks[c].push_back(v - 1);
    }
  }
  return from_parity(std::move(checks), n);
}

}  // namespace corrma
