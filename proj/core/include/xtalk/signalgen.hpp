#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "xtalk/matrix.hpp"
#include "xtalk/signal.hpp"

namespace xtalk {

/// CODATA classical electron radius, meters.
inline constexpr double kClassicalElectronRadius = 2.8179403262e-15;
/// CO2 laser line, meters.
inline constexpr double kLambdaCO2 = 10.591e-6;
/// Nd:YAG line, meters.
inline constexpr double kLambdaNdYag = 1.064e-6;

/// Two-color heterodyne interferometer. Defaults are the downconverted
/// ~1 MHz IF chain sampled at 8 MSPS.
struct InterferometerParams {
  double lambda1 = kLambdaCO2;
  double lambda2 = kLambdaNdYag;
  double f_het1 = 1.0e6;
  double f_het2 = 1.1e6;
  double sample_rate = 8.0e6;
  double r_e = kClassicalElectronRadius;

  /// Throws InvalidArgument on lambda1 == lambda2, carriers at or above
  /// Nyquist, or non-positive r_e / rates.
  void validate() const;
};

enum class TrackLabel { Density, Vibration, Combined };

struct PhaseTrack {
  std::vector<double> samples;  // radians
  TrackLabel label = TrackLabel::Combined;
};

/// Square, finite, invertible coupling matrix A (S = A Y).
class MixingModel {
 public:
  explicit MixingModel(Matrix a, double det_threshold = 1e-9);

  const Matrix& matrix() const noexcept { return a_; }
  std::size_t size() const noexcept { return a_.rows(); }
  MixingModel inverse() const;

 private:
  Matrix a_;
};

/// channel i = sin(2 pi f_het,i k / fs + track_i[k]), k = 0..n-1.
MultichannelSignal synth_clean_pair(const InterferometerParams& params, const PhaseTrack& track1,
                                    const PhaseTrack& track2, std::size_t n);

enum class ScenarioKind { Quiet, VibrationOnly, ShotRamp };

ScenarioKind parse_scenario_kind(std::string_view tag);
std::string_view to_string(ScenarioKind kind);

/// Shape of the synthetic plasma shot and the mechanical vibration.
/// Time fractions are relative to the record length.
struct ScenarioShape {
  double density_plateau = 3.0e19;  // line-integrated density, m^-2
  double ramp_start = 0.2;
  double plateau_start = 0.4;
  double plateau_end = 0.7;
  double ramp_end = 0.9;
  // Optical path length excursion L(t) = sum a_k sin(2 pi f_k t + p_k) - L(0), meters.
  std::vector<double> vibration_amplitude = {2.0e-6, 1.0e-6};
  std::vector<double> vibration_freq = {500.0, 1200.0};
  std::vector<double> vibration_phase = {0.0, 0.3};
};

/// Phase tracks plus the ground truth that produced them.
///
/// Forward model: phase_i = r_e lambda_i N_L(t) + 2 pi L(t) / lambda_i, so
/// the two-color density formula recovers N_L exactly and cancels L.
struct ScenarioTracks {
  PhaseTrack phase1;
  PhaseTrack phase2;
  std::vector<double> density;      // N_L(t), m^-2
  std::vector<double> path_length;  // L(t), m
};

ScenarioTracks make_scenario_tracks(ScenarioKind kind, std::size_t n,
                                    const InterferometerParams& params,
                                    const ScenarioShape& shape = {});

/// S = A Y sample-wise.
MultichannelSignal apply_crosstalk(const MultichannelSignal& clean, const MixingModel& model);

/// Use as snr_db to disable noise.
inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

/// Adds white Gaussian noise per channel so that mean-square signal power
/// over noise variance equals snr_db. Channels draw from one GaussianSource
/// in channel order.
MultichannelSignal add_awgn(const MultichannelSignal& signal, double snr_db, std::uint64_t seed);

/// Mid-tread uniform quantizer with step full_scale / 2^(bits-1); codes
/// span [-2^(bits-1), 2^(bits-1) - 1].
MultichannelSignal quantize_adc(const MultichannelSignal& signal, int bits, double full_scale);

}  // namespace xtalk
