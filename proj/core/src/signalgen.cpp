#include "xtalk/signalgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "xtalk/error.hpp"
#include "xtalk/rng.hpp"

namespace xtalk {

using std::numbers::pi;

void InterferometerParams::validate() const {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw InvalidArgument("wavelengths must be positive");
  if (lambda1 == lambda2) throw InvalidArgument("lambda1 and lambda2 must differ");
  if (!(sample_rate > 0.0)) throw InvalidArgument("sample_rate must be positive");
  if (!(f_het1 > 0.0) || !(f_het2 > 0.0)) throw InvalidArgument("heterodyne frequencies must be positive");
  if (f_het1 >= sample_rate / 2 || f_het2 >= sample_rate / 2)
    throw InvalidArgument("heterodyne frequency at or above Nyquist");
  if (!(r_e > 0.0)) throw InvalidArgument("r_e must be positive");
}

MixingModel::MixingModel(Matrix a, double det_threshold) : a_(std::move(a)) {
  if (a_.empty() || !a_.is_square()) throw InvalidArgument("mixing matrix must be square");
  for (double v : a_.values())
    if (!std::isfinite(v)) throw InvalidArgument("mixing matrix has non-finite entries");
  const double det = determinant(a_);
  if (!(std::abs(det) > det_threshold))
    throw InvalidArgument("mixing matrix is singular (|det| = " + std::to_string(std::abs(det)) + ")");
}

MixingModel MixingModel::inverse() const { return MixingModel(xtalk::inverse(a_), 0.0); }

MultichannelSignal synth_clean_pair(const InterferometerParams& params, const PhaseTrack& track1,
                                    const PhaseTrack& track2, std::size_t n) {
  params.validate();
  if (track1.samples.size() != n || track2.samples.size() != n)
    throw InvalidArgument("synth_clean_pair: phase track length differs from n");
  Matrix data(2, n);
  const double freqs[2] = {params.f_het1, params.f_het2};
  const PhaseTrack* tracks[2] = {&track1, &track2};
  for (std::size_t c = 0; c < 2; ++c) {
    const double w = 2.0 * pi * freqs[c] / params.sample_rate;
    auto out = data.row(c);
    for (std::size_t k = 0; k < n; ++k)
      out[k] = std::sin(w * static_cast<double>(k) + tracks[c]->samples[k]);
  }
  return {std::move(data), params.sample_rate};
}

ScenarioKind parse_scenario_kind(std::string_view tag) {
  if (tag == "quiet") return ScenarioKind::Quiet;
  if (tag == "vibration-only") return ScenarioKind::VibrationOnly;
  if (tag == "shot-ramp") return ScenarioKind::ShotRamp;
  throw InvalidArgument("unknown scenario '" + std::string(tag) + "'");
}

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Quiet: return "quiet";
    case ScenarioKind::VibrationOnly: return "vibration-only";
    case ScenarioKind::ShotRamp: return "shot-ramp";
  }
  return "?";
}

namespace {

// Trapezoid in [0, 1]: rises over [ramp_start, plateau_start], falls over
// [plateau_end, ramp_end].
double trapezoid(double x, const ScenarioShape& s) {
  if (x <= s.ramp_start || x >= s.ramp_end) return 0.0;
  if (x < s.plateau_start) return (x - s.ramp_start) / (s.plateau_start - s.ramp_start);
  if (x <= s.plateau_end) return 1.0;
  return (s.ramp_end - x) / (s.ramp_end - s.plateau_end);
}

}  // namespace

ScenarioTracks make_scenario_tracks(ScenarioKind kind, std::size_t n,
                                    const InterferometerParams& params,
                                    const ScenarioShape& shape) {
  if (n < 2) throw InvalidArgument("make_scenario_tracks: n must be >= 2");
  params.validate();
  if (shape.vibration_amplitude.size() != shape.vibration_freq.size() ||
      shape.vibration_amplitude.size() != shape.vibration_phase.size())
    throw InvalidArgument("scenario shape: vibration component lists differ in length");
  if (!(shape.ramp_start < shape.plateau_start && shape.plateau_start <= shape.plateau_end &&
        shape.plateau_end < shape.ramp_end))
    throw InvalidArgument("scenario shape: ramp fractions must be increasing");

  ScenarioTracks out;
  out.density.assign(n, 0.0);
  out.path_length.assign(n, 0.0);

  const bool vibration = kind != ScenarioKind::Quiet;
  const bool shot = kind == ScenarioKind::ShotRamp;

  if (vibration) {
    double l0 = 0.0;
    for (std::size_t j = 0; j < shape.vibration_amplitude.size(); ++j)
      l0 += shape.vibration_amplitude[j] * std::sin(shape.vibration_phase[j]);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) / params.sample_rate;
      double l = 0.0;
      for (std::size_t j = 0; j < shape.vibration_amplitude.size(); ++j)
        l += shape.vibration_amplitude[j] *
             std::sin(2.0 * pi * shape.vibration_freq[j] * t + shape.vibration_phase[j]);
      out.path_length[k] = l - l0;
    }
  }
  if (shot) {
    const double last = static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k)
      out.density[k] = shape.density_plateau * trapezoid(static_cast<double>(k) / last, shape);
  }

  const TrackLabel label = shot ? TrackLabel::Combined
                                : (vibration ? TrackLabel::Vibration : TrackLabel::Combined);
  out.phase1 = {std::vector<double>(n), label};
  out.phase2 = {std::vector<double>(n), label};
  for (std::size_t k = 0; k < n; ++k) {
    out.phase1.samples[k] = params.r_e * params.lambda1 * out.density[k] +
                            2.0 * pi * out.path_length[k] / params.lambda1;
    out.phase2.samples[k] = params.r_e * params.lambda2 * out.density[k] +
                            2.0 * pi * out.path_length[k] / params.lambda2;
  }
  return out;
}

MultichannelSignal apply_crosstalk(const MultichannelSignal& clean, const MixingModel& model) {
  if (model.size() != clean.channels())
    throw InvalidArgument("apply_crosstalk: mixing matrix is " + std::to_string(model.size()) +
                          "x" + std::to_string(model.size()) + " but signal has " +
                          std::to_string(clean.channels()) + " channels");
  return {model.matrix() * clean.data(), clean.sample_rate()};
}

MultichannelSignal add_awgn(const MultichannelSignal& signal, double snr_db, std::uint64_t seed) {
  if (std::isinf(snr_db) && snr_db > 0) return signal;
  if (std::isnan(snr_db)) throw InvalidArgument("add_awgn: snr_db is NaN");
  Matrix data = signal.data();
  GaussianSource noise(seed);
  for (std::size_t c = 0; c < data.rows(); ++c) {
    auto row = data.row(c);
    double power = 0.0;
    for (double v : row) power += v * v;
    power /= static_cast<double>(row.size());
    if (power == 0.0) throw InvalidArgument("add_awgn: channel " + std::to_string(c) + " has zero power");
    const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
    for (double& v : row) v += sigma * noise.next();
  }
  return {std::move(data), signal.sample_rate()};
}

MultichannelSignal quantize_adc(const MultichannelSignal& signal, int bits, double full_scale) {
  if (bits < 2 || bits > 24) throw InvalidArgument("quantize_adc: bits must be in [2, 24]");
  if (!(full_scale > 0.0)) throw InvalidArgument("quantize_adc: full_scale must be positive");
  const double half_levels = std::ldexp(1.0, bits - 1);
  const double step = full_scale / half_levels;
  Matrix data = signal.data();
  for (double& v : data.values()) {
    const double code = std::clamp(std::nearbyint(v / step), -half_levels, half_levels - 1.0);
    v = code * step;
  }
  return {std::move(data), signal.sample_rate()};
}

}  // namespace xtalk
