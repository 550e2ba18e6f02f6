#include <cstdlib>
#include <ostream>

#include <CLI11.hpp>

#include "xtalk/error.hpp"
#include "xtalk/kv.hpp"
#include "xtalk_cli/commands.hpp"

namespace xtalk::cli {

namespace {

struct Flags {
  std::string config;
  std::string out_dir;
  std::string in;
  std::string manifest;
  std::optional<std::uint64_t> seed;
  std::string coupling;
  std::string contrast;
  std::optional<double> tol;
  std::string scenario;
  std::string snr_db;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "key = value configuration file");
  sub->add_option("--out-dir", f.out_dir, "output directory (default: $XTALK_OUT_DIR or .)");
  sub->add_option("--seed", f.seed, "seed for noise and ICA initialization");
  sub->add_option("--coupling", f.coupling, "coupling matrix, rows split by ';', e.g. \"1,0.9;0.9,1\"");
  sub->add_option("--contrast", f.contrast, "logcosh | gauss");
  sub->add_option("--tol", f.tol, "fastICA convergence tolerance");
  sub->add_option("--scenario", f.scenario, "quiet | vibration-only | shot-ramp");
  sub->add_option("--snr-db", f.snr_db, "channel SNR in dB, or none");
  sub->add_option("--set", f.overrides, "override any configuration key (key=value), repeatable");
}

fs::path resolve_out_dir(const Flags& f) {
  if (!f.out_dir.empty()) return f.out_dir;
  if (const char* env = std::getenv("XTALK_OUT_DIR"); env && *env) return env;
  return ".";
}

std::optional<fs::path> resolve_manifest(const Flags& f, const fs::path& out_dir) {
  if (!f.manifest.empty()) return fs::path(f.manifest);
  if (fs::exists(out_dir / "manifest.txt")) return out_dir / "manifest.txt";
  return std::nullopt;
}

/// defaults < manifest < --config file < flags
RunConfig resolve_config(const Flags& f, const std::optional<fs::path>& manifest) {
  RunConfig cfg;
  if (manifest) apply(cfg, KeyValueDoc::load(*manifest));
  if (!f.config.empty()) apply(cfg, KeyValueDoc::load(f.config));
  if (!f.scenario.empty()) apply_override(cfg, "scenario.kind=" + f.scenario);
  if (!f.coupling.empty()) apply_override(cfg, "scenario.coupling=" + f.coupling);
  if (!f.snr_db.empty()) apply_override(cfg, "scenario.snr_db=" + f.snr_db);
  if (f.seed) {
    cfg.scenario.seed = *f.seed;
    cfg.ica.seed = *f.seed;
  }
  if (!f.contrast.empty()) apply_override(cfg, "ica.contrast=" + f.contrast);
  if (f.tol) cfg.ica.tol = *f.tol;
  for (const auto& o : f.overrides) apply_override(cfg, o);
  cfg.validate();
  return cfg;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::Config: return kExitConfig;
    case ErrorKind::Numeric: return kExitNumeric;
    case ErrorKind::Io: return kExitIo;
  }
  return kExitNumeric;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Crosstalk removal for two-color heterodyne interferometers"};
  app.require_subcommand(1);
  Flags f;

  auto* gen = app.add_subcommand("gen", "synthesize clean and mixed signals with ground truth");
  auto* mix = app.add_subcommand("mix", "apply coupling, noise and ADC quantization to a clean pair");
  auto* unmix = app.add_subcommand("unmix", "remove crosstalk with fastICA");
  auto* density = app.add_subcommand("density", "demodulate and compute line-integrated density");
  auto* dip = app.add_subcommand("diplex", "split a single-detector two-tone composite");
  auto* report = app.add_subcommand("report", "merge the records of a run directory");
  for (auto* sub : {gen, mix, unmix, density, dip}) add_common(sub, f);
  for (auto* sub : {mix, unmix, density, dip}) sub->add_option("--in", f.in, "input signal file");
  for (auto* sub : {mix, unmix, density}) sub->add_option("--manifest", f.manifest, "manifest of the generating run");
  report->add_option("--out-dir", f.out_dir, "run directory (default: $XTALK_OUT_DIR or .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "xtalk: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const auto out_dir = resolve_out_dir(f);
    auto input = [&](const char* fallback) { return f.in.empty() ? out_dir / fallback : fs::path(f.in); };
    if (report->parsed()) return cmd_report(out_dir, out);
    if (gen->parsed()) return cmd_gen(resolve_config(f, std::nullopt), out_dir, out);
    if (dip->parsed()) {
      const auto in = f.in.empty() ? std::nullopt : std::optional<fs::path>(f.in);
      return cmd_diplex(resolve_config(f, std::nullopt), in, out_dir, out);
    }
    const auto manifest = resolve_manifest(f, out_dir);
    const auto cfg = resolve_config(f, manifest);
    if (mix->parsed()) return cmd_mix(cfg, input("clean.icdx"), out_dir, out);
    if (unmix->parsed()) return cmd_unmix(cfg, input("mixed.icdx"), manifest, out_dir, out);
    return cmd_density(cfg, input("corrected.icdx"), manifest, out_dir, out);
  } catch (const Error& e) {
    err << "xtalk: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "xtalk: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace xtalk::cli
