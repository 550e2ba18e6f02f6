#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "xtalk_cli/run_config.hpp"

namespace xtalk::cli {

/// Process exit codes, a stable contract for scripts.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,    // bad flags, malformed or unknown configuration
  kExitNumeric = 3,   // degeneracy, non-convergence, total tracking loss
  kExitIo = 4,
  kExitPartial = 5,   // density written, but some ranges lost tracking
};

namespace fs = std::filesystem;

// Each command writes into `out_dir` and logs one line per file to `log`.
// Errors surface as xtalk::Error; `run` maps them onto exit codes.

/// clean.icdx, mixed.icdx, truth_phase.csv, truth_density.csv, manifest.txt
int cmd_gen(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log);
/// Couples, corrupts and quantizes a clean pair: mixed.icdx, manifest.txt
int cmd_mix(const RunConfig& cfg, const fs::path& in, const fs::path& out_dir, std::ostream& log);
/// corrected.icdx, separation.txt, quality.txt. Ground-truth metrics need
/// the generating manifest.
int cmd_unmix(const RunConfig& cfg, const fs::path& in, const std::optional<fs::path>& manifest,
              const fs::path& out_dir, std::ostream& log);
/// density.csv, phase.csv, density_report.txt
int cmd_density(const RunConfig& cfg, const fs::path& in, const std::optional<fs::path>& manifest,
                const fs::path& out_dir, std::ostream& log);
/// diplex_a.icdx, diplex_b.icdx, diplex_report.txt, diplex_manifest.txt (and composite.icdx
/// when the composite is synthesized)
int cmd_diplex(const RunConfig& cfg, const std::optional<fs::path>& in, const fs::path& out_dir, std::ostream& log);
/// Merges every record in out_dir into report.txt and quality.csv.
int cmd_report(const fs::path& out_dir, std::ostream& out);

/// Full command-line entry point.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xtalk::cli
