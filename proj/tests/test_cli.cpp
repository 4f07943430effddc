#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "corrma/config.hpp"
#include "corrma/ldpc_codec.hpp"
#include "corrma/region.hpp"
#include "corrma/runner.hpp"
#include "doctest.h"

using namespace corrma;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "corrma_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> csv_lines(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CORRMA_BIN_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config parser") {
  const auto cfg = KeyValueConfig::parse_string(
      "# comment\n"
      "[region]\n"
      "n_max = 8\n"
      "rho_list = 0.9 0.95\n"
      "flag = true\n",
      "test.ini");
  CHECK(cfg.get_long("region", "n_max") == 8);
  CHECK(cfg.get_double_list("region", "rho_list") ==
        std::vector<double>{0.9, 0.95});
  CHECK(cfg.get_bool_or("region", "flag", false));
  CHECK(cfg.get_or("region", "missing", "dflt") == "dflt");
  CHECK_THROWS_AS(cfg.get("region", "missing"), ConfigError);

  SUBCASE("malformed documents carry line diagnostics") {
    try {
      KeyValueConfig::parse_string("[a]\nnot a pair\n", "bad.ini");
      FAIL("expected throw");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("bad.ini:2") != std::string::npos);
    }
    CHECK_THROWS_AS(KeyValueConfig::parse_string("x = 1\n", "o.ini"),
                    ConfigError);
  }

  SUBCASE("unknown keys are named") {
    const auto c = KeyValueConfig::parse_string("[region]\nbogus = 1\n", "u.ini");
    try {
      c.restrict_keys("region", {"n_max"});
      FAIL("expected throw");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
  }
}

TEST_CASE("run_region outputs") {
  const auto dir = fresh_dir("region");
  const auto cfg = KeyValueConfig::parse_string(
      "[region]\n"
      "n_max = 6\n"
      "rho_list = 0.95\n"
      "rate = 0.5\n"
      "boundary_n = 3\n"
      "boundary_rho = 0.95\n"
      "boundary_fixed = unb\n"
      "grid_step = 0.005\n");
  RunOptions opts;
  opts.out_dir = dir.string();
  run_region(cfg, opts);

  const auto entropy = csv_lines(dir / "entropy.csv");
  CHECK(entropy.front() == "rho,n,entropy_bits,lower_bound,upper_bound");
  CHECK(entropy.size() == 1 + 6);

  const auto points = csv_lines(dir / "characteristic_points.csv");
  CHECK(points.size() == 1 + 5);  // n = 2..6

  // values in the CSV match the module output
  {
    std::istringstream row(points[1]);  // n = 2 line
    std::string tok;
    std::vector<std::string> cells;
    while (std::getline(row, tok, ',')) cells.push_back(tok);
    REQUIRE(cells.size() == 5);
    const auto expect = characteristic_points(2, 0.95, 0.5);
    CHECK(std::abs(std::stod(cells[2]) - expect.lambda_bal) < 1e-6);
    CHECK(std::abs(std::stod(cells[3]) - expect.lambda_unb) < 1e-6);
  }

  CHECK(fs::exists(dir / "boundary.csv"));
  CHECK(fs::exists(dir / "manifest.txt"));
  const auto manifest = slurp(dir / "manifest.txt");
  CHECK(manifest.find("command = region") != std::string::npos);
  CHECK(manifest.find("region.n_max = 6") != std::string::npos);

  SUBCASE("byte-identical on rerun") {
    const auto dir2 = fresh_dir("region2");
    RunOptions o2;
    o2.out_dir = dir2.string();
    run_region(cfg, o2);
    CHECK(slurp(dir / "entropy.csv") == slurp(dir2 / "entropy.csv"));
    CHECK(slurp(dir / "boundary.csv") == slurp(dir2 / "boundary.csv"));
    CHECK(slurp(dir / "manifest.txt") == slurp(dir2 / "manifest.txt"));
  }
}

TEST_CASE("run_ber noiseless profile") {
  const auto dir = fresh_dir("ber");
  const auto cfg = KeyValueConfig::parse_string(
      "[ber]\n"
      "code = ldpc\n"
      "ldpc_block_len = 256\n"
      "ldpc_iters = 30\n"
      "n = 2\n"
      "rho = 0.95\n"
      "max_blocks = 3\n"
      "target_errors = 1000000\n"
      "balanced_gammas = 10000\n"
      "seed = 5\n");
  RunOptions opts;
  opts.out_dir = dir.string();
  run_ber(cfg, opts);

  const auto lines = csv_lines(dir / "ber.csv");
  CHECK(lines.front() == "gamma_1,gamma_2,source,ber,ci95,blocks,errors");
  REQUIRE(lines.size() == 3);
  for (std::size_t i = 1; i < lines.size(); ++i)
    CHECK(lines[i].find("0.000000e+00") != std::string::npos);
  CHECK(fs::exists(dir / "manifest.txt"));
  CHECK(fs::exists(dir / "runlog.txt"));
}

TEST_CASE("run_ber smoke profile stays inside the time budget") {
  const auto dir = fresh_dir("ber_smoke");
  const auto cfg = KeyValueConfig::parse_string(
      "[ber]\n"
      "code = ldpc\n"
      "ldpc_block_len = 2048\n"
      "n = 2\n"
      "rho = 0.95\n"
      "max_blocks = 20\n"
      "target_errors = 1000000\n"
      "balanced_gammas = 1.05\n"
      "seed = 3\n");
  RunOptions opts;
  opts.out_dir = dir.string();
  const auto t0 = std::chrono::steady_clock::now();
  run_ber(cfg, opts);
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  CHECK(dt < 60.0);
  CHECK(csv_lines(dir / "ber.csv").size() == 3);
  const auto manifest = slurp(dir / "manifest.txt");
  CHECK(manifest.find("ber.total_blocks = 20") != std::string::npos);
}

TEST_CASE("run_exit writes characteristic points with theory columns") {
  const auto dir = fresh_dir("exit_small");
  const auto cfg = KeyValueConfig::parse_string(
      "[exit]\n"
      "codes = sccc\n"
      "n_list = 2\n"
      "rho = 0.95\n"
      "tol = 0.02\n"
      "mc_samples = 100000\n"
      "min_llr_samples = 8192\n"
      "sccc_info_len = 512\n"
      "seed = 11\n");
  RunOptions opts;
  opts.out_dir = dir.string();
  run_exit(cfg, opts);

  const auto lines = csv_lines(dir / "characteristic_points.csv");
  CHECK(lines.front() ==
        "code,n,rho,lambda_bal,lambda_unb,theory_bal,theory_unb");
  REQUIRE(lines.size() == 2);
  std::istringstream row(lines[1]);
  std::string tok;
  std::vector<std::string> cells;
  while (std::getline(row, tok, ',')) cells.push_back(tok);
  REQUIRE(cells.size() == 7);
  CHECK(cells[0] == "sccc");
  const double bal = std::stod(cells[3]), unb = std::stod(cells[4]);
  const double tbal = std::stod(cells[5]), tunb = std::stod(cells[6]);
  CHECK(bal >= tbal);
  CHECK(unb >= tunb);
  CHECK(bal >= unb - 0.04);  // geometry, up to tolerance noise
  CHECK(fs::exists(dir / "trace_sccc_n2_bal.csv"));
  CHECK(fs::exists(dir / "trace_sccc_n2_unb.csv"));
}

TEST_CASE("run_exit rejects oversized n") {
  const auto cfg = KeyValueConfig::parse_string(
      "[exit]\n"
      "codes = ldpc\n"
      "n_list = 14\n");
  RunOptions opts;
  opts.out_dir = fresh_dir("exit_bad").string();
  CHECK_THROWS_AS(run_exit(cfg, opts), ConfigError);
}

TEST_CASE("run_build_code writes a loadable alist") {
  const auto dir = fresh_dir("buildcode");
  const auto cfg = KeyValueConfig::parse_string(
      "[build-code]\n"
      "kind = ldpc\n"
      "ldpc_block_len = 256\n"
      "dd = regular_3_6\n"
      "seed = 9\n");
  RunOptions opts;
  opts.out_dir = dir.string();
  run_build_code(cfg, opts);
  std::ifstream in(dir / "ldpc_256.alist");
  REQUIRE(in);
  const auto code = LdpcCode::read_alist(in);
  CHECK(code.block_len() == 256);
  CHECK(code.info_len() == 128);
}

TEST_CASE("cli binary end to end") {
  const auto dir = fresh_dir("cli");
  const auto cfg_path = dir / "region.ini";
  {
    std::ofstream out(cfg_path);
    out << "[region]\nn_max = 4\nrho_list = 0.9\n";
  }

  SUBCASE("success is exit 0") {
    CHECK(run_cli("region --config " + cfg_path.string() + " --out " +
                  (dir / "out").string()) == 0);
    CHECK(fs::exists(dir / "out" / "entropy.csv"));
  }

  SUBCASE("config errors are exit 1") {
    const auto bad = dir / "bad.ini";
    {
      std::ofstream out(bad);
      out << "[region]\nn_max = oops\n";
    }
    CHECK(run_cli("region --config " + bad.string()) == 1);
    CHECK(run_cli("region --config " + (dir / "missing.ini").string()) == 1);
    CHECK(run_cli("bogus-command --config " + cfg_path.string()) == 1);
    CHECK(run_cli("region") == 1);  // missing --config
  }

  SUBCASE("seed override changes the manifest") {
    const auto o1 = dir / "s1";
    const auto o2 = dir / "s2";
    CHECK(run_cli("region --config " + cfg_path.string() + " --seed 7 --out " +
                  o1.string()) == 0);
    CHECK(run_cli("region --config " + cfg_path.string() + " --seed 8 --out " +
                  o2.string()) == 0);
    CHECK(slurp(o1 / "manifest.txt").find("seed = 7") != std::string::npos);
    CHECK(slurp(o2 / "manifest.txt").find("seed = 8") != std::string::npos);
  }
}
