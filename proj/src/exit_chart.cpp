#include "corrma/exit_chart.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "corrma/channel.hpp"
#include "corrma/jcd.hpp"
#include "corrma/region.hpp"

namespace corrma {

namespace {

constexpr long kMcChunk = 65536;

std::vector<NumericPdf> double_flip(const std::vector<NumericPdf>& inputs,
                                    double rho) {
  std::vector<NumericPdf> flipped;
  flipped.reserve(inputs.size());
  for (const auto& pdf : inputs) {
    auto f = pdf.bsc_flip(rho).bsc_flip(rho);
    f.build_cdf();
    flipped.push_back(std::move(f));
  }
  return flipped;
}

NumericPdf histogram_from_counts(const PdfGrid& grid,
                                 const std::vector<long>& counts,
                                 long total) {
  NumericPdf out(grid);
  for (int i = 0; i < grid.bins(); ++i)
    out.mass()[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  return out;
}

void validate_density_args(const std::vector<NumericPdf>& inputs, double rho,
                           int n, long mc_samples) {
  if (static_cast<int>(inputs.size()) != n - 1)
    throw std::invalid_argument(
        "connection_output_density: expected n-1 input densities");
  if (mc_samples < 100000)
    throw std::invalid_argument(
        "connection_output_density: needs at least 1e5 samples");
  if (!(rho >= 0.5 && rho <= 1.0))
    throw std::invalid_argument(
        "connection_output_density: rho must lie in [0.5, 1]");
}

}  // namespace

double measure_output_snr(std::span<const double> llr_samples) {
  if (llr_samples.size() < 10000)
    throw std::invalid_argument("measure_output_snr: needs >= 1e4 samples");
  double sum = 0.0;
  for (const double v : llr_samples) sum += v;
  const double mean = sum / static_cast<double>(llr_samples.size());
  return std::max(0.0, 0.5 * mean);
}

double measure_output_snr_variance(std::span<const double> llr_samples) {
  if (llr_samples.size() < 10000)
    throw std::invalid_argument("measure_output_snr: needs >= 1e4 samples");
  double sum = 0.0;
  for (const double v : llr_samples) sum += v;
  const double mean = sum / static_cast<double>(llr_samples.size());
  double var = 0.0;
  for (const double v : llr_samples) var += (v - mean) * (v - mean);
  var /= static_cast<double>(llr_samples.size());
  if (var <= 0.0) return 0.0;
  return std::max(0.0, mean * mean / (2.0 * var));
}

NumericPdf connection_output_density_serial(
    const std::vector<NumericPdf>& inputs, double rho, int n, long mc_samples,
    std::uint64_t seed) {
  validate_density_args(inputs, rho, n, mc_samples);
  const PdfGrid grid = inputs.empty() ? PdfGrid{} : inputs[0].grid();
  const auto flipped = double_flip(inputs, rho);
  const ConnectionNode node(n, rho);

  std::vector<long> counts(grid.bins(), 0);
  std::vector<double> tuple(inputs.size());
  const long chunks = (mc_samples + kMcChunk - 1) / kMcChunk;
  for (long c = 0; c < chunks; ++c) {
    Rng rng(seed, static_cast<std::uint64_t>(c));
    const long lo = c * kMcChunk;
    const long hi = std::min(mc_samples, lo + kMcChunk);
    for (long s = lo; s < hi; ++s) {
      for (std::size_t k = 0; k < flipped.size(); ++k)
        tuple[k] = flipped[k].sample(rng);
      counts[grid.nearest(clip_llr(node.llr(tuple)))]++;
    }
  }
  auto out = histogram_from_counts(grid, counts, mc_samples);
  out.build_cdf();
  return out;
}

NumericPdf connection_output_density(const std::vector<NumericPdf>& inputs,
                                     double rho, int n, long mc_samples,
                                     std::uint64_t seed) {
  validate_density_args(inputs, rho, n, mc_samples);
  const PdfGrid grid = inputs.empty() ? PdfGrid{} : inputs[0].grid();
  const auto flipped = double_flip(inputs, rho);
  const ConnectionNode node(n, rho);

  const long chunks = (mc_samples + kMcChunk - 1) / kMcChunk;
  std::vector<std::vector<long>> chunk_counts(
      chunks, std::vector<long>(grid.bins(), 0));

#pragma omp parallel for schedule(dynamic)
  for (long c = 0; c < chunks; ++c) {
    Rng rng(seed, static_cast<std::uint64_t>(c));
    std::vector<double> tuple(inputs.size());
    auto& counts = chunk_counts[c];
    const long lo = c * kMcChunk;
    const long hi = std::min(mc_samples, lo + kMcChunk);
    for (long s = lo; s < hi; ++s) {
      for (std::size_t k = 0; k < flipped.size(); ++k)
        tuple[k] = flipped[k].sample(rng);
      counts[grid.nearest(clip_llr(node.llr(tuple)))]++;
    }
  }

  std::vector<long> counts(grid.bins(), 0);
  for (const auto& part : chunk_counts)
    for (int i = 0; i < grid.bins(); ++i) counts[i] += part[i];
  auto out = histogram_from_counts(grid, counts, mc_samples);
  out.build_cdf();
  return out;
}

double z_surface(const CodecAdapter& codec, int n, double rho, double gamma,
                 std::span<const double> snr_in, const ExitParams& params,
                 std::vector<ExitTracePoint>* trace) {
  if (static_cast<int>(snr_in.size()) != n - 1)
    throw std::invalid_argument("z_surface: expected n-1 input SNRs");
  if (!(gamma > 0.0)) throw std::invalid_argument("z_surface: gamma must be > 0");

  // a-priori densities of the other decoders' messages, then the density of
  // the connection output feeding this decoder's information bits
  std::vector<NumericPdf> apriori_in;
  apriori_in.reserve(snr_in.size());
  for (const double s : snr_in)
    apriori_in.push_back(
        NumericPdf::clipped_gaussian_consistent(params.grid, 2.0 * s));
  NumericPdf b_out = connection_output_density(apriori_in, rho, n,
                                               params.mc_samples, params.seed);

  const int L = codec.info_len();
  const int blocks =
      (params.min_llr_samples + L - 1) / L;

  // all-zero transmission; each block draws its channel noise and its
  // a-priori samples from per-block streams
  const std::vector<std::uint8_t> zeros(static_cast<std::size_t>(L), 0);
  const auto codeword = codec.encode(zeros);
  const auto cfg = ChannelConfig::from_snr(gamma);
  const auto clean = modulate(codeword, cfg.ec);

  std::vector<double> block_sums(blocks, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (int b = 0; b < blocks; ++b) {
    const std::uint64_t bseed = mix_seed(params.seed, 1000 + b);
    auto signal = clean;
    add_awgn(signal, cfg.n0, mix_seed(bseed, 0));
    auto chllr = channel_llr(signal, cfg.ec, cfg.n0);
    clip_block(chllr);

    Rng ap_rng(bseed, 1);
    LlrBlock apriori(L);
    for (int j = 0; j < L; ++j) apriori[j] = b_out.sample(ap_rng);

    const auto dec = codec.decode(chllr, apriori);
    double sum = 0.0;
    for (const double v : dec.extrinsic_info) sum += v;
    block_sums[b] = sum;
  }

  double total = 0.0;
  for (const double s : block_sums) total += s;
  const double mean = total / (static_cast<double>(blocks) * L);
  const double snr_out = std::max(0.0, 0.5 * mean);

  if (trace) {
    double s_in = 0.0;
    for (const double s : snr_in) s_in += s;
    if (!snr_in.empty()) s_in /= static_cast<double>(snr_in.size());
    trace->push_back({gamma, s_in, snr_out});
  }
  return snr_out;
}

namespace {

bool converged_unbalanced(const CodecAdapter& codec, int n, double rho,
                          double gamma, const ExitParams& params,
                          std::vector<ExitTracePoint>* trace) {
  const std::vector<double> sat(static_cast<std::size_t>(n - 1), kSaturatedSnr);
  for (int rep = 0; rep < 2; ++rep) {
    ExitParams p = params;
    p.seed = mix_seed(params.seed, 77 + rep);
    if (z_surface(codec, n, rho, gamma, sat, p, trace) < kConvergedSnr)
      return false;
  }
  return true;
}

bool converged_balanced(const CodecAdapter& codec, int n, double rho,
                        double gamma, const ExitParams& params,
                        std::vector<ExitTracePoint>* trace) {
  double s = 0.0;
  for (int step = 0; step < kMaxFixedPointSteps; ++step) {
    ExitParams p = params;
    p.seed = mix_seed(params.seed, 100 + step);
    const std::vector<double> in(static_cast<std::size_t>(n - 1), s);
    const double out = z_surface(codec, n, rho, gamma, in, p, trace);
    if (out >= kConvergedSnr) {
      // sustain for a second consecutive evaluation at the escaped point
      ExitParams p2 = params;
      p2.seed = mix_seed(params.seed, 500 + step);
      const std::vector<double> in2(static_cast<std::size_t>(n - 1), out);
      return z_surface(codec, n, rho, gamma, in2, p2, trace) >= kConvergedSnr;
    }
    if (out <= s + 0.02) return false;  // stalled below the escape threshold
    s = out;
  }
  return false;
}

template <typename ConvergedFn>
ThresholdResult bisect_threshold(ConvergedFn converged, double theory_lambda,
                                 double tol) {
  ThresholdResult res;
  double lo = snr_from_capacity(std::max(0.02, 0.9 * theory_lambda));
  double hi = snr_from_capacity(1.0);

  // the upper bracket must converge; widen a little before giving up
  int guard = 0;
  while (!converged(hi, &res.trace)) {
    hi *= 2.0;
    if (++guard > 2)
      throw std::runtime_error(
          "threshold search: no convergence inside the gamma bracket");
  }
  // the lower bracket should not converge; shrink if it does
  guard = 0;
  while (converged(lo, &res.trace)) {
    hi = lo;
    lo *= 0.6;
    if (++guard > 6) break;  // effectively zero threshold, keep hi
  }

  while (capacity_from_snr(hi) - capacity_from_snr(lo) > tol) {
    const double mid_lambda =
        0.5 * (capacity_from_snr(hi) + capacity_from_snr(lo));
    const double mid = snr_from_capacity(mid_lambda);
    if (converged(mid, &res.trace))
      hi = mid;
    else
      lo = mid;
  }
  res.gamma = hi;
  res.lambda = capacity_from_snr(hi);
  res.bracket_ok = true;
  return res;
}

}  // namespace

ThresholdResult find_lambda_unb(const CodecAdapter& codec, int n, double rho,
                                double tol, const ExitParams& params) {
  if (!(tol > 0.0)) throw std::invalid_argument("find_lambda_unb: tol must be > 0");
  const auto theory = characteristic_points(n, rho, codec.rate());
  auto fn = [&](double gamma, std::vector<ExitTracePoint>* trace) {
    return converged_unbalanced(codec, n, rho, gamma, params, trace);
  };
  return bisect_threshold(fn, theory.lambda_unb, tol);
}

ThresholdResult find_lambda_bal(const CodecAdapter& codec, int n, double rho,
                                double tol, const ExitParams& params) {
  if (!(tol > 0.0)) throw std::invalid_argument("find_lambda_bal: tol must be > 0");
  const auto theory = characteristic_points(n, rho, codec.rate());
  auto fn = [&](double gamma, std::vector<ExitTracePoint>* trace) {
    return converged_balanced(codec, n, rho, gamma, params, trace);
  };
  return bisect_threshold(fn, theory.lambda_bal, tol);
}

}  // namespace corrma
