// Timing comparison between the OpenMP kernels and their serial reference
// implementations: connection-node block transform, connection-output
// density sampling, and a batch of joint-decoding blocks.

#include <chrono>
#include <cstdio>
#include <vector>

#include "corrma/codec_adapter.hpp"
#include "corrma/exit_chart.hpp"
#include "corrma/jcd.hpp"
#include "corrma/numeric_pdf.hpp"
#include "corrma/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace corrma;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename Fn>
double time_call(Fn&& fn) {
  const double t0 = now_seconds();
  fn();
  return now_seconds() - t0;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP disabled)\n");
#endif

  {
    const int n = 4, L = 200000;
    const ConnectionNode node(n, 0.95);
    std::vector<LlrBlock> rows(n, LlrBlock(L));
    Rng rng(7);
    for (auto& row : rows)
      for (auto& v : row) v = 20.0 * (rng.uniform() - 0.5);
    std::vector<const LlrBlock*> others;
    for (int k = 1; k < n; ++k) others.push_back(&rows[k]);

    LlrBlock a, b;
    const double ts = time_call([&] { a = connection_block_serial(node, others); });
    const double tp = time_call([&] { b = connection_block(node, others); });
    std::printf("connection_block   n=%d L=%d   serial %.3fs  parallel %.3fs  match=%s\n",
                n, L, ts, tp, a == b ? "yes" : "NO");
  }

  {
    const int n = 3;
    const long samples = 2000000;
    const PdfGrid grid;
    std::vector<NumericPdf> inputs(
        static_cast<std::size_t>(n - 1),
        NumericPdf::clipped_gaussian_consistent(grid, 8.0));
    NumericPdf a(grid), b(grid);
    const double ts = time_call([&] {
      a = connection_output_density_serial(inputs, 0.95, n, samples, 11);
    });
    const double tp = time_call(
        [&] { b = connection_output_density(inputs, 0.95, n, samples, 11); });
    std::printf("connection_density n=%d S=%ld  serial %.3fs  parallel %.3fs  match=%s\n",
                n, samples, ts, tp, a.mass() == b.mass() ? "yes" : "NO");
  }

  {
    JcdConfig cfg;
    cfg.n = 2;
    cfg.rho = 0.95;
    cfg.codec = std::make_shared<LdpcAdapter>(
        LdpcCode::build(DegreeDistributions::irregular3(), 2048, 5), 50, true);
    cfg.gammas = {1.1, 1.1};
    cfg.max_blocks = 12;
    cfg.target_errors = 1000000;
    cfg.seed = 5;
    const std::vector<std::vector<double>> grid{cfg.gammas};
    const double t = time_call([&] { (void)simulate_ber(cfg, grid); });
    std::printf("simulate_ber 12 blocks ldpc N=2048: %.3fs (wave-parallel)\n", t);
  }
  return 0;
}
