#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "corrma/config.hpp"
#include "corrma/runner.hpp"
#include "corrma/version.hpp"

namespace {

void usage(std::FILE* to) {
  std::fprintf(to,
               "usage: corrma <command> --config <path> [--seed <u64>] "
               "[--out <dir>]\n"
               "\n"
               "commands:\n"
               "  region      feasible-region tables and boundary projections\n"
               "  ber         joint-decoding Monte Carlo bit error rates\n"
               "  exit        density-evolution thresholds for concrete codes\n"
               "  build-code  construct and serialize a code instance\n"
               "\n"
               "Link SNR gamma is signal power over noise power (2 Ec / N0);\n"
               "capacity lambda = 0.5 log2(1 + gamma). Exit codes: 0 success,\n"
               "1 config error, 2 runtime error.\n");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    usage(stderr);
    return 1;
  }
  const std::string command = argv[1];
  if (command == "--help" || command == "-h" || command == "help") {
    usage(stdout);
    return 0;
  }
  if (command == "--version") {
    std::printf("%s\n", corrma::kVersion);
    return 0;
  }

  std::string config_path;
  corrma::RunOptions opts;
  for (int i = 2; i < argc; ++i) {
    const std::string arg = argv[i];
    auto next = [&]() -> const char* {
      if (i + 1 >= argc) {
        std::fprintf(stderr, "corrma: %s needs a value\n", arg.c_str());
        std::exit(1);
      }
      return argv[++i];
    };
    if (arg == "--config") {
      config_path = next();
    } else if (arg == "--seed") {
      opts.seed_override = std::strtoull(next(), nullptr, 10);
    } else if (arg == "--out") {
      opts.out_dir = next();
    } else {
      std::fprintf(stderr, "corrma: unknown flag '%s'\n", arg.c_str());
      usage(stderr);
      return 1;
    }
  }
  if (config_path.empty()) {
    std::fprintf(stderr, "corrma: --config is required\n");
    return 1;
  }

  try {
    const auto cfg = corrma::KeyValueConfig::parse_file(config_path);
    if (command == "region") {
      corrma::run_region(cfg, opts);
    } else if (command == "ber") {
      corrma::run_ber(cfg, opts);
    } else if (command == "exit") {
      corrma::run_exit(cfg, opts);
    } else if (command == "build-code") {
      corrma::run_build_code(cfg, opts);
    } else {
      std::fprintf(stderr, "corrma: unknown command '%s'\n", command.c_str());
      usage(stderr);
      return 1;
    }
  } catch (const corrma::ConfigError& e) {
    std::fprintf(stderr, "corrma: config error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "corrma: config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "corrma: runtime error: %s\n", e.what());
    return 2;
  }
  return 0;
}
