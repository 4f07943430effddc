#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "corrma/codec_adapter.hpp"
#include "corrma/numeric_pdf.hpp"

namespace corrma {

// Density-evolution style analysis of one component decoder inside the joint
// decoder: consistent Gaussian a-priori messages from the other sources pass
// through two BSC sign-flip stages (source k to the common bit, common bit
// to the target source) and the exact connection rule, the result convolves
// with the channel density at the information bits, and the decoder's
// extrinsic output SNR is measured after its fixed internal iterations.

// SNR of a message ensemble under the consistency convention mean = 2 SNR.
// Requires at least 10^4 samples. A variance-based estimate mean^2 / (2 var)
// is available as a cross-check diagnostic.
double measure_output_snr(std::span<const double> llr_samples);
double measure_output_snr_variance(std::span<const double> llr_samples);

// Density of the connection-node output for a target decoder: applies the
// two cascaded BSC flips to each input density, then Monte Carlo samples
// tuples through the exact combining rule. mc_samples >= 10^5. The OpenMP
// version and the serial reference are bit-identical (integer bin counts in
// fixed chunks).
NumericPdf connection_output_density(const std::vector<NumericPdf>& inputs,
                                     double rho, int n, long mc_samples,
                                     std::uint64_t seed);
NumericPdf connection_output_density_serial(const std::vector<NumericPdf>& inputs,
                                            double rho, int n, long mc_samples,
                                            std::uint64_t seed);

struct ExitParams {
  long mc_samples = 1000000;   // tuples through the connection rule
  int min_llr_samples = 10000; // extrinsic samples per Z evaluation
  std::uint64_t seed = 1;
  PdfGrid grid;
};

struct ExitTracePoint {
  double gamma;
  double snr_in;  // common input SNR (balanced) or the saturated value
  double snr_out;
};

// One point of the Z characteristic: input a-priori SNRs snr_in (size n-1),
// channel SNR gamma, all-zero transmission, output extrinsic SNR.
double z_surface(const CodecAdapter& codec, int n, double rho, double gamma,
                 std::span<const double> snr_in, const ExitParams& params,
                 std::vector<ExitTracePoint>* trace = nullptr);

struct ThresholdResult {
  double lambda = 0.0;  // capacity at the located threshold
  double gamma = 0.0;
  bool bracket_ok = false;
  std::vector<ExitTracePoint> trace;
};

// Saturated a-priori SNR standing in for "the other decoders already
// converged"; realized as the clipped consistent Gaussian, which is
// delta-like at the +50 LLR clip.
inline constexpr double kSaturatedSnr = 50.0;
// A trajectory or an output at this SNR counts as decoder convergence.
inline constexpr double kConvergedSnr = 50.0;
inline constexpr int kMaxFixedPointSteps = 30;

// Smallest channel SNR at which the decoder converges given saturated
// a-priori information from the other n-1 sources (two independent
// evaluations must agree). Returns lambda = 0.5 log2(1 + gamma).
ThresholdResult find_lambda_unb(const CodecAdapter& codec, int n, double rho,
                                double tol, const ExitParams& params);

// Smallest channel SNR at which the balanced fixed point s <- Z(s 1, gamma)
// started from s = 0 escapes past kConvergedSnr within the step budget,
// sustained for two consecutive evaluations.
ThresholdResult find_lambda_bal(const CodecAdapter& codec, int n, double rho,
                                double tol, const ExitParams& params);

}  // namespace corrma
