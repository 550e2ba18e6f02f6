#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "xtalk/demod.hpp"
#include "xtalk/fastica.hpp"
#include "xtalk/preprocess.hpp"
#include "xtalk/signalgen.hpp"

namespace xtalk {

/// Everything needed to regenerate a synthetic run bit-for-bit.
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::ShotRamp;
  InterferometerParams params;
  std::size_t n = std::size_t{1} << 18;
  Matrix coupling = {{1.0, 0.4}, {0.3, 1.0}};
  double snr_db = kNoNoise;
  int adc_bits = 0;  // 0 disables quantization
  double adc_full_scale = 2.0;
  std::uint64_t seed = 1;
  ScenarioShape shape;
};

struct Scenario {
  ScenarioTracks tracks;
  MultichannelSignal clean;
  MultichannelSignal mixed;
};

/// tracks -> clean pair -> crosstalk -> noise -> ADC.
Scenario generate_scenario(const ScenarioConfig& cfg);

struct Separation {
  WhiteningTransform transform;
  SeparationResult result;
  MultichannelSignal components;  // identified: channel i carries expected_freqs[i]
};

/// whiten -> fit -> identify -> unmix. Non-convergence is left in the
/// result flags; identification failures throw.
Separation separate(const MultichannelSignal& mixed, const FastIcaConfig& cfg,
                    std::span<const double> expected_freqs);

struct DensityRecovery {
  DemodOutput ch1;
  DemodOutput ch2;
  DensitySeries density;          // referenced to zero at `reference`
  std::vector<SampleRange> lost;  // union over both channels
  std::size_t reference = 0;      // first settled sample
};

/// Demodulates both channels and applies the two-color formula. The
/// density is referenced to its value at the first settled sample, which
/// absorbs sign flips and 2 pi branches of the phase. Tracking loss is
/// reported in `lost`, never thrown.
DensityRecovery recover_density(const MultichannelSignal& two_channel, const InterferometerParams& params,
                                std::optional<DemodSettings> ch1 = std::nullopt,
                                std::optional<DemodSettings> ch2 = std::nullopt);

/// truth[k * decimation], re-referenced to the value at `reference`.
std::vector<double> reference_truth(std::span<const double> truth, std::size_t decimation,
                                    std::size_t count, std::size_t reference);

/// RMS(recovered - truth) / RMS(truth) over [settle, n - settle).
double relative_rms_error(std::span<const double> recovered, std::span<const double> truth, std::size_t settle);

/// Per-channel standard deviation.
std::vector<double> channel_std(const MultichannelSignal& s);

}  // namespace xtalk
