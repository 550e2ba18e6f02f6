#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "xtalk/diplexer.hpp"
#include "xtalk/fastica.hpp"
#include "xtalk/kv.hpp"
#include "xtalk/pipeline.hpp"

namespace xtalk::cli {

/// Demodulator overrides. Zero means "derive from the carrier spacing".
struct DemodOverrides {
  double lowpass_cutoff = 0.0;
  std::size_t decimation = 0;
  std::size_t lowpass_order = 0;
  double envelope_floor = 0.2;

  DemodSettings resolve(double carrier, double other_carrier, double sample_rate) const;
};

/// Synthetic single-detector composite for `diplex` when no input is given.
struct DiplexScenario {
  double sample_rate = 200.0e6;
  std::size_t n = std::size_t{1} << 16;
  double amplitude_a = 1.0;
  double amplitude_b = 1.0;
};

/// Every tunable of a run. Resolution order: built-in defaults, then a
/// configuration file, then command-line flags.
struct RunConfig {
  ScenarioConfig scenario;
  FastIcaConfig ica;
  DemodOverrides demod;
  DiplexConfig diplex;
  DiplexScenario diplex_input;

  void validate() const;
};

/// Applies every entry of `doc`. Unknown keys and malformed values throw
/// ConfigError naming the document origin and line.
void apply(RunConfig& cfg, const KeyValueDoc& doc);
/// Applies one `key=value` override (line 0 in messages).
void apply_override(RunConfig& cfg, const std::string& assignment);

/// All resolved keys, in a fixed order. This is the manifest format.
KeyValueDoc to_doc(const RunConfig& cfg);

/// Names of every recognised key.
const std::vector<std::string>& known_keys();

}  // namespace xtalk::cli
