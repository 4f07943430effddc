#include "corrma/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "corrma/codec_adapter.hpp"
#include "corrma/exit_chart.hpp"
#include "corrma/jcd.hpp"
#include "corrma/region.hpp"
#include "corrma/version.hpp"

namespace corrma {

namespace {

namespace fs = std::filesystem;

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string cap6(double v) { return fmt("%.6f", v); }

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

struct Manifest {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> resolved;

  void add(const std::string& key, const std::string& value) {
    resolved.emplace_back(key, value);
  }
  void write(const fs::path& dir) const {
    auto out = open_out(dir, "manifest.txt");
    out << "artifact = " << kVersion << "\n";
    out << "command = " << command << "\n";
    out << "seed = " << seed << "\n";
    auto sorted = resolved;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [k, v] : sorted) out << k << " = " << v << "\n";
  }
};

class RunTimer {
 public:
  explicit RunTimer(fs::path dir) : dir_(std::move(dir)) {}
  ~RunTimer() {
    const auto elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start_)
                             .count();
    std::ofstream out(dir_ / "runlog.txt");
    if (out) out << "wall_clock_seconds = " << fmt("%.3f", elapsed) << "\n";
  }

 private:
  fs::path dir_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::uint64_t resolve_seed(const KeyValueConfig& cfg, const std::string& section,
                           const RunOptions& opts) {
  if (opts.seed_override) return *opts.seed_override;
  return cfg.get_u64_or(section, "seed", 1);
}

std::shared_ptr<const CodecAdapter> make_codec(const KeyValueConfig& cfg,
                                               const std::string& section,
                                               std::uint64_t seed,
                                               bool early_exit,
                                               Manifest& manifest) {
  const std::string kind = cfg.get(section, "code");
  if (kind == "sccc") {
    const int info_len =
        static_cast<int>(cfg.get_long_or(section, "sccc_info_len", 4096));
    const int iters =
        static_cast<int>(cfg.get_long_or(section, "sccc_iters", 10));
    if (info_len < 1) throw ConfigError("sccc_info_len must be >= 1");
    manifest.add(section + ".sccc_info_len", std::to_string(info_len));
    manifest.add(section + ".sccc_iters", std::to_string(iters));
    return std::make_shared<ScccAdapter>(ScccCode::make(info_len, seed), iters);
  }
  if (kind == "ldpc") {
    const int block_len =
        static_cast<int>(cfg.get_long_or(section, "ldpc_block_len", 4096));
    const int iters =
        static_cast<int>(cfg.get_long_or(section, "ldpc_iters", 50));
    manifest.add(section + ".ldpc_block_len", std::to_string(block_len));
    manifest.add(section + ".ldpc_iters", std::to_string(iters));
    return std::make_shared<LdpcAdapter>(
        LdpcCode::build(DegreeDistributions::irregular3(), block_len, seed),
        iters, early_exit);
  }
  throw ConfigError("key 'code' must be 'sccc' or 'ldpc', got '" + kind + "'");
}

}  // namespace

void run_region(const KeyValueConfig& cfg, const RunOptions& opts) {
  cfg.restrict_keys("region",
                    {"n_max", "rho_list", "rate", "seed", "boundary_n",
                     "boundary_rho", "boundary_fixed", "grid_step"});
  const fs::path dir(opts.out_dir);
  RunTimer timer(dir);

  const int n_max = static_cast<int>(cfg.get_long_or("region", "n_max", 20));
  if (n_max < 2) throw ConfigError("[region] n_max must be >= 2");
  const auto rhos = cfg.has("region", "rho_list")
                        ? cfg.get_double_list("region", "rho_list")
                        : std::vector<double>{0.9, 0.95, 0.99};
  const double rate = cfg.get_double_or("region", "rate", 0.5);
  if (!(rate > 0.0 && rate <= 1.0))
    throw ConfigError("[region] rate must lie in (0, 1]");
  for (const double rho : rhos)
    if (!(rho >= 0.5 && rho <= 1.0))
      throw ConfigError("[region] rho_list entries must lie in [0.5, 1]");

  Manifest manifest;
  manifest.command = "region";
  manifest.seed = resolve_seed(cfg, "region", opts);
  manifest.add("region.n_max", std::to_string(n_max));
  manifest.add("region.rate", cap6(rate));
  {
    std::string rl;
    for (const double r : rhos) rl += (rl.empty() ? "" : " ") + cap6(r);
    manifest.add("region.rho_list", rl);
  }

  {
    auto out = open_out(dir, "entropy.csv");
    out << "rho,n,entropy_bits,lower_bound,upper_bound\n";
    for (const double rho : rhos) {
      const double hb = binary_entropy(rho);
      for (int n = 1; n <= n_max; ++n) {
        out << cap6(rho) << "," << n << "," << cap6(joint_entropy(n, rho))
            << "," << cap6(1.0 + (n - 1) * hb) << "," << cap6(1.0 + n * hb)
            << "\n";
      }
    }
  }
  {
    auto out = open_out(dir, "characteristic_points.csv");
    out << "rho,n,lambda_bal,lambda_unb,lambda_lim\n";
    for (const double rho : rhos) {
      for (int n = 2; n <= n_max; ++n) {
        const auto pts = characteristic_points(n, rho, rate);
        out << cap6(rho) << "," << n << "," << cap6(pts.lambda_bal) << ","
            << cap6(pts.lambda_unb) << "," << cap6(pts.lambda_lim) << "\n";
      }
    }
  }

  if (cfg.has("region", "boundary_n")) {
    const int bn = static_cast<int>(cfg.get_long("region", "boundary_n"));
    if (bn < 2) throw ConfigError("[region] boundary_n must be >= 2");
    const double brho = cfg.get_double_or("region", "boundary_rho", 0.95);
    const double step = cfg.get_double_or("region", "grid_step", 1e-3);
    const std::string fixed_kind =
        cfg.get_or("region", "boundary_fixed", "unb");
    const FeasibleRegion region(bn, brho, rate);
    double fixed_value = 0.0;
    if (fixed_kind == "unb") {
      fixed_value = region.points().lambda_unb;
    } else if (fixed_kind == "rate") {
      fixed_value = rate;
    } else {
      char* end = nullptr;
      fixed_value = std::strtod(fixed_kind.c_str(), &end);
      if (end == fixed_kind.c_str() || *end != '\0')
        throw ConfigError(
            "[region] boundary_fixed must be 'unb', 'rate' or a number");
    }
    const std::vector<double> fixed(static_cast<std::size_t>(bn - 2),
                                    fixed_value);
    const auto curve = region.boundary_projection(fixed, step);
    auto out = open_out(dir, "boundary.csv");
    out << "lambda1,lambda2\n";
    for (const auto& [l1, l2] : curve)
      out << cap6(l1) << "," << cap6(l2) << "\n";
    manifest.add("region.boundary_n", std::to_string(bn));
    manifest.add("region.boundary_rho", cap6(brho));
    manifest.add("region.boundary_fixed", fixed_kind);
    manifest.add("region.grid_step", fmt("%.6g", step));
  }

  manifest.write(dir);
}

void run_ber(const KeyValueConfig& cfg, const RunOptions& opts) {
  cfg.restrict_keys(
      "ber", {"code", "n", "rho", "seed", "sccc_info_len", "sccc_iters",
              "ldpc_block_len", "ldpc_iters", "external_iters", "early_exit",
              "max_blocks", "target_errors", "balanced_gammas", "gamma_rows"});
  const fs::path dir(opts.out_dir);
  RunTimer timer(dir);

  Manifest manifest;
  manifest.command = "ber";
  manifest.seed = resolve_seed(cfg, "ber", opts);

  JcdConfig jc;
  jc.n = static_cast<int>(cfg.get_long_or("ber", "n", 2));
  jc.rho = cfg.get_double_or("ber", "rho", 0.95);
  jc.external_iters =
      static_cast<int>(cfg.get_long_or("ber", "external_iters", 5));
  jc.early_exit = cfg.get_bool_or("ber", "early_exit", true);
  jc.max_blocks = static_cast<int>(cfg.get_long_or("ber", "max_blocks", 100));
  jc.target_errors = cfg.get_long_or("ber", "target_errors", 100);
  jc.seed = manifest.seed;
  jc.codec = make_codec(cfg, "ber", manifest.seed, jc.early_exit, manifest);

  std::vector<std::vector<double>> grid;
  if (cfg.has("ber", "balanced_gammas")) {
    for (const double g : cfg.get_double_list("ber", "balanced_gammas"))
      grid.emplace_back(static_cast<std::size_t>(jc.n), g);
  } else if (cfg.has("ber", "gamma_rows")) {
    // rows separated by '|', per-link gammas inside each row
    std::string raw = cfg.get("ber", "gamma_rows");
    std::replace(raw.begin(), raw.end(), '|', '\n');
    std::istringstream in(raw);
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream row(line);
      std::vector<double> gs;
      double v;
      while (row >> v) gs.push_back(v);
      if (!gs.empty()) grid.push_back(std::move(gs));
    }
    if (grid.empty()) throw ConfigError("[ber] gamma_rows is empty");
  } else {
    throw ConfigError("[ber] needs 'balanced_gammas' or 'gamma_rows'");
  }
  for (const auto& row : grid)
    if (static_cast<int>(row.size()) != jc.n)
      throw ConfigError("[ber] each gamma row must have n entries");

  jc.gammas = grid.front();
  try {
    jc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[ber] ") + e.what());
  }

  manifest.add("ber.code", cfg.get("ber", "code"));
  manifest.add("ber.n", std::to_string(jc.n));
  manifest.add("ber.rho", cap6(jc.rho));
  manifest.add("ber.external_iters", std::to_string(jc.external_iters));
  manifest.add("ber.early_exit", jc.early_exit ? "true" : "false");
  manifest.add("ber.max_blocks", std::to_string(jc.max_blocks));
  manifest.add("ber.target_errors", std::to_string(jc.target_errors));
  manifest.add("ber.grid_points", std::to_string(grid.size()));

  // append per grid point so an interrupted run leaves a valid partial CSV
  auto out = open_out(dir, "ber.csv");
  for (int k = 1; k <= jc.n; ++k) out << "gamma_" << k << ",";
  out << "source,ber,ci95,blocks,errors\n";
  out.flush();

  long total_blocks = 0;
  for (const auto& row : grid) {
    const auto points = simulate_ber(jc, {row});
    for (const auto& p : points) {
      for (const double g : p.gammas) out << cap6(g) << ",";
      out << (p.source + 1) << "," << fmt("%.6e", p.ber) << ","
          << fmt("%.6e", p.ci95) << "," << p.blocks << "," << p.errors << "\n";
    }
    out.flush();
    if (!points.empty()) total_blocks += points.front().blocks;
  }
  manifest.add("ber.total_blocks", std::to_string(total_blocks));
  manifest.write(dir);
}

void run_exit(const KeyValueConfig& cfg, const RunOptions& opts) {
  cfg.restrict_keys(
      "exit", {"codes", "n_list", "rho", "rate", "tol", "mc_samples",
               "min_llr_samples", "seed", "sccc_info_len", "sccc_iters",
               "ldpc_block_len", "ldpc_iters"});
  const fs::path dir(opts.out_dir);
  RunTimer timer(dir);

  Manifest manifest;
  manifest.command = "exit";
  manifest.seed = resolve_seed(cfg, "exit", opts);

  const auto codes = cfg.has("exit", "codes")
                         ? cfg.get_string_list("exit", "codes")
                         : std::vector<std::string>{"sccc", "ldpc"};
  const auto n_list = cfg.has("exit", "n_list")
                          ? cfg.get_double_list("exit", "n_list")
                          : std::vector<double>{2};
  const double rho = cfg.get_double_or("exit", "rho", 0.95);
  const double rate = cfg.get_double_or("exit", "rate", 0.5);
  const double tol = cfg.get_double_or("exit", "tol", 0.005);
  if (!(tol > 0.0)) throw ConfigError("[exit] tol must be > 0");

  ExitParams params;
  params.mc_samples = cfg.get_long_or("exit", "mc_samples", 1000000);
  params.min_llr_samples =
      static_cast<int>(cfg.get_long_or("exit", "min_llr_samples", 10000));
  params.seed = manifest.seed;
  if (params.mc_samples < 100000)
    throw ConfigError("[exit] mc_samples must be >= 100000");

  for (const double nv : n_list) {
    const int n = static_cast<int>(nv);
    if (n < 2) throw ConfigError("[exit] n_list entries must be >= 2");
    if (n > 12)
      throw ConfigError(
          "[exit] n > 12 refused: the exact connection rule costs O(2^(n-1)) "
          "per bit and larger n needs the out-of-scope pairwise "
          "approximation");
  }

  manifest.add("exit.rho", cap6(rho));
  manifest.add("exit.rate", cap6(rate));
  manifest.add("exit.tol", fmt("%.6g", tol));
  manifest.add("exit.mc_samples", std::to_string(params.mc_samples));
  manifest.add("exit.min_llr_samples", std::to_string(params.min_llr_samples));

  auto out = open_out(dir, "characteristic_points.csv");
  out << "code,n,rho,lambda_bal,lambda_unb,theory_bal,theory_unb\n";

  for (const std::string& code_name : codes) {
    const std::string section = "exit";
    std::shared_ptr<const CodecAdapter> codec;
    if (code_name == "sccc") {
      const int info_len = static_cast<int>(
          cfg.get_long_or(section, "sccc_info_len", 2048));
      const int iters =
          static_cast<int>(cfg.get_long_or(section, "sccc_iters", 10));
      codec = std::make_shared<ScccAdapter>(
          ScccCode::make(info_len, manifest.seed), iters);
      manifest.add("exit.sccc_info_len", std::to_string(info_len));
      manifest.add("exit.sccc_iters", std::to_string(iters));
    } else if (code_name == "ldpc") {
      const int block_len = static_cast<int>(
          cfg.get_long_or(section, "ldpc_block_len", 4096));
      const int iters =
          static_cast<int>(cfg.get_long_or(section, "ldpc_iters", 50));
      // fixed iteration count for density measurement: no early exit
      codec = std::make_shared<LdpcAdapter>(
          LdpcCode::build(DegreeDistributions::irregular3(), block_len,
                          manifest.seed),
          iters, /*allow_early_exit=*/false);
      manifest.add("exit.ldpc_block_len", std::to_string(block_len));
      manifest.add("exit.ldpc_iters", std::to_string(iters));
    } else {
      throw ConfigError("[exit] codes entries must be 'sccc' or 'ldpc'");
    }

    for (const double nv : n_list) {
      const int n = static_cast<int>(nv);
      const auto theory = characteristic_points(n, rho, rate);
      ExitParams p = params;
      p.seed = mix_seed(params.seed, static_cast<std::uint64_t>(n) * 7919);
      const auto bal = find_lambda_bal(*codec, n, rho, tol, p);
      const auto unb = find_lambda_unb(*codec, n, rho, tol, p);

      out << code_name << "," << n << "," << cap6(rho) << ","
          << cap6(bal.lambda) << "," << cap6(unb.lambda) << ","
          << cap6(theory.lambda_bal) << "," << cap6(theory.lambda_unb) << "\n";
      out.flush();

      for (const char* which : {"bal", "unb"}) {
        const auto& trace = (which[0] == 'b') ? bal.trace : unb.trace;
        auto tout = open_out(dir, "trace_" + code_name + "_n" +
                                      std::to_string(n) + "_" + which + ".csv");
        tout << "gamma,snr_in,snr_out\n";
        for (const auto& row : trace)
          tout << cap6(row.gamma) << "," << cap6(row.snr_in) << ","
               << cap6(row.snr_out) << "\n";
      }
    }
  }
  manifest.write(dir);
}

void run_build_code(const KeyValueConfig& cfg, const RunOptions& opts) {
  cfg.restrict_keys("build-code", {"kind", "seed", "ldpc_block_len", "dd",
                                   "sccc_info_len"});
  const fs::path dir(opts.out_dir);
  RunTimer timer(dir);

  Manifest manifest;
  manifest.command = "build-code";
  manifest.seed = resolve_seed(cfg, "build-code", opts);

  const std::string kind = cfg.get("build-code", "kind");
  manifest.add("build-code.kind", kind);
  if (kind == "ldpc") {
    const int block_len = static_cast<int>(
        cfg.get_long_or("build-code", "ldpc_block_len", 4096));
    const std::string dd_name = cfg.get_or("build-code", "dd", "irregular3");
    DegreeDistributions dd;
    if (dd_name == "irregular3") {
      dd = DegreeDistributions::irregular3();
    } else if (dd_name.rfind("regular_", 0) == 0) {
      int dv = 0, dc = 0;
      if (std::sscanf(dd_name.c_str(), "regular_%d_%d", &dv, &dc) != 2)
        throw ConfigError("[build-code] dd regular form is regular_<dv>_<dc>");
      dd = DegreeDistributions::regular(dv, dc);
    } else {
      throw ConfigError("[build-code] unknown dd '" + dd_name + "'");
    }
    const auto code = LdpcCode::build(dd, block_len, manifest.seed);
    auto out = open_out(dir, "ldpc_" + std::to_string(block_len) + ".alist");
    code.write_alist(out);
    manifest.add("build-code.ldpc_block_len", std::to_string(block_len));
    manifest.add("build-code.dd", dd_name);
    manifest.add("build-code.realized_rate", cap6(code.rate()));
  } else if (kind == "sccc") {
    const int info_len = static_cast<int>(
        cfg.get_long_or("build-code", "sccc_info_len", 4096));
    const auto code = ScccCode::make(info_len, manifest.seed);
    auto out = open_out(dir, "sccc.txt");
    out << code.description() << "\n";
    manifest.add("build-code.sccc_info_len", std::to_string(info_len));
  } else {
    throw ConfigError("[build-code] kind must be 'ldpc' or 'sccc'");
  }
  manifest.write(dir);
}

}  // namespace corrma
