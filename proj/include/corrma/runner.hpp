#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "corrma/config.hpp"

namespace corrma {

struct RunOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
};

// Experiment runners behind the CLI subcommands. Each writes its CSV outputs
// plus manifest.txt (deterministic echo of the resolved config) and
// runlog.txt (timing, not covered by the reproducibility guarantee) into
// out_dir. ConfigError means a bad config (exit 1), anything else a runtime
// failure (exit 2).
void run_region(const KeyValueConfig& cfg, const RunOptions& opts);
void run_ber(const KeyValueConfig& cfg, const RunOptions& opts);
void run_exit(const KeyValueConfig& cfg, const RunOptions& opts);
void run_build_code(const KeyValueConfig& cfg, const RunOptions& opts);

}  // namespace corrma
