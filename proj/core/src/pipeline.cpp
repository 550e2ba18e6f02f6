#include "xtalk/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "xtalk/error.hpp"

namespace xtalk {

Scenario generate_scenario(const ScenarioConfig& cfg) {
  auto tracks = make_scenario_tracks(cfg.kind, cfg.n, cfg.params, cfg.shape);
  auto clean = synth_clean_pair(cfg.params, tracks.phase1, tracks.phase2, cfg.n);
  auto mixed = apply_crosstalk(clean, MixingModel(cfg.coupling));
  mixed = add_awgn(mixed, cfg.snr_db, cfg.seed);
  if (cfg.adc_bits > 0) mixed = quantize_adc(mixed, cfg.adc_bits, cfg.adc_full_scale);
  return {std::move(tracks), std::move(clean), std::move(mixed)};
}

Separation separate(const MultichannelSignal& mixed, const FastIcaConfig& cfg,
                    std::span<const double> expected_freqs) {
  auto white = whiten(mixed);
  auto result = fit(white, cfg);
  result.assignment = identify_components(unmix(mixed, result, white.transform), expected_freqs);
  auto components = unmix(mixed, result, white.transform);
  return {std::move(white.transform), std::move(result), std::move(components)};
}

DensityRecovery recover_density(const MultichannelSignal& s, const InterferometerParams& params,
                                std::optional<DemodSettings> ch1, std::optional<DemodSettings> ch2) {
  if (s.channels() != 2) throw InvalidArgument("recover_density: need exactly two channels");
  params.validate();
  if (s.sample_rate() != params.sample_rate)
    throw InvalidArgument("recover_density: signal rate differs from interferometer sample rate");
  const auto s1 = ch1.value_or(default_demod_settings(params.f_het1, params.f_het2, params.sample_rate));
  const auto s2 = ch2.value_or(default_demod_settings(params.f_het2, params.f_het1, params.sample_rate));
  if (s1.decimation != s2.decimation) throw InvalidArgument("recover_density: channels need equal decimation");

  DensityRecovery out;
  out.ch1 = demodulate_detailed(s.channel(0), s.sample_rate(), s1);
  out.ch2 = demodulate_detailed(s.channel(1), s.sample_rate(), s2);
  out.density = line_integrated_density(out.ch1.phase, out.ch2.phase, params);
  out.reference = std::min(out.density.settle, out.density.samples.size() - 1);
  const double ref = out.density.samples[out.reference];
  for (double& v : out.density.samples) v -= ref;

  auto all = out.ch1.lost;
  all.insert(all.end(), out.ch2.lost.begin(), out.ch2.lost.end());
  std::sort(all.begin(), all.end(), [](const SampleRange& a, const SampleRange& b) { return a.first < b.first; });
  for (const auto& r : all) {
    if (!out.lost.empty() && r.first <= out.lost.back().last + 1)
      out.lost.back().last = std::max(out.lost.back().last, r.last);
    else
      out.lost.push_back(r);
  }
  return out;
}

std::vector<double> reference_truth(std::span<const double> truth, std::size_t decimation, std::size_t count,
                                    std::size_t reference) {
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) out[j] = truth[std::min(j * decimation, truth.size() - 1)];
  const double ref = out[std::min(reference, count - 1)];
  for (double& v : out) v -= ref;
  return out;
}

double relative_rms_error(std::span<const double> recovered, std::span<const double> truth, std::size_t settle) {
  if (recovered.size() != truth.size()) throw InvalidArgument("relative_rms_error: length mismatch");
  if (2 * settle >= truth.size()) throw InvalidArgument("relative_rms_error: nothing left after settling");
  double err = 0.0, ref = 0.0;
  for (std::size_t k = settle; k < truth.size() - settle; ++k) {
    err += (recovered[k] - truth[k]) * (recovered[k] - truth[k]);
    ref += truth[k] * truth[k];
  }
  if (ref == 0.0) throw InvalidArgument("relative_rms_error: truth is identically zero");
  return std::sqrt(err / ref);
}

std::vector<double> channel_std(const MultichannelSignal& s) {
  std::vector<double> out;
  for (std::size_t c = 0; c < s.channels(); ++c) {
    const auto x = s.channel(c);
    double m = 0.0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    out.push_back(std::sqrt(acc / static_cast<double>(x.size())));
  }
  return out;
}

}  // namespace xtalk
