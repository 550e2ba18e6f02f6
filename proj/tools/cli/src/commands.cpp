#include "xtalk_cli/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>

#include "xtalk/error.hpp"
#include "xtalk/io.hpp"
#include "xtalk/metrics.hpp"
#include "xtalk/serialize.hpp"

namespace xtalk::cli {

namespace {

void put(const fs::path& path, const MultichannelSignal& s, std::ostream& log) {
  write_signal(path, s);
  log << "wrote " << path.string() << "\n";
}

void put(const fs::path& path, const KeyValueDoc& doc, std::ostream& log) {
  doc.save(path);
  log << "wrote " << path.string() << "\n";
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

RunConfig config_from_manifest(const fs::path& manifest) {
  RunConfig cfg;
  apply(cfg, KeyValueDoc::load(manifest));
  cfg.validate();
  return cfg;
}

std::string format_ranges(const std::vector<SampleRange>& ranges) {
  if (ranges.empty()) return "none";
  std::string out;
  for (const auto& r : ranges) {
    if (!out.empty()) out += ',';
    out += std::to_string(r.first) + "-" + std::to_string(r.last);
  }
  return out;
}

double mean_of(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m += v;
  return m / static_cast<double>(x.size());
}

double peak_of(std::span<const double> x) {
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  return p;
}

// Derived from the recorded configuration so identical runs label identically
// wherever they live; the directory name is the fallback.
std::string run_label(const fs::path& dir, const KeyValueDoc& merged) {
  const auto kind = merged.get("scenario.kind");
  const auto seed = merged.get("scenario.seed");
  if (kind && seed) {
    std::string label = *kind + "/seed" + *seed;
    if (const auto snr = merged.get("scenario.snr_db"); snr && *snr != "none") label += "/snr" + *snr;
    if (const auto c = merged.get("scenario.coupling")) label += "/A=" + *c;
    for (char& ch : label)
      if (ch == ',') ch = ' ';
    return label;
  }
  const auto name = fs::weakly_canonical(dir).filename().string();
  return name.empty() ? "run" : name;
}

}  // namespace

int cmd_gen(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  cfg.validate();
  ensure_dir(out_dir);
  const auto scen = generate_scenario(cfg.scenario);
  const double fs = cfg.scenario.params.sample_rate;
  put(out_dir / "clean.icdx", scen.clean, log);
  put(out_dir / "mixed.icdx", scen.mixed, log);
  put(out_dir / "truth_phase.csv",
      MultichannelSignal::from_channels({scen.tracks.phase1.samples, scen.tracks.phase2.samples}, fs), log);
  put(out_dir / "truth_density.csv",
      MultichannelSignal::from_channels({scen.tracks.density, scen.tracks.path_length}, fs), log);
  put(out_dir / "manifest.txt", to_doc(cfg), log);
  return kExitOk;
}

int cmd_mix(const RunConfig& cfg, const fs::path& in, const fs::path& out_dir, std::ostream& log) {
  cfg.validate();
  ensure_dir(out_dir);
  const auto clean = read_signal(in);
  auto mixed = apply_crosstalk(clean, MixingModel(cfg.scenario.coupling));
  mixed = add_awgn(mixed, cfg.scenario.snr_db, cfg.scenario.seed);
  if (cfg.scenario.adc_bits > 0) mixed = quantize_adc(mixed, cfg.scenario.adc_bits, cfg.scenario.adc_full_scale);
  put(out_dir / "mixed.icdx", mixed, log);
  put(out_dir / "manifest.txt", to_doc(cfg), log);
  return kExitOk;
}

int cmd_unmix(const RunConfig& cfg, const fs::path& in, const std::optional<fs::path>& manifest,
              const fs::path& out_dir, std::ostream& log) {
  cfg.validate();
  ensure_dir(out_dir);
  const auto mixed = read_signal(in);
  if (mixed.channels() != 2) throw InvalidArgument("unmix: expected a two-channel signal, got " +
                                                   std::to_string(mixed.channels()));
  const auto& p = cfg.scenario.params;
  const std::vector<double> freqs = {p.f_het1, p.f_het2};
  const auto sep = separate(mixed, cfg.ica, freqs);

  put(out_dir / "corrected.icdx", sep.components, log);
  KeyValueDoc record;
  write_whitening(record, sep.transform);
  write_separation(record, sep.result);
  put(out_dir / "separation.txt", record, log);

  QualityReport q;
  KeyValueDoc quality;
  for (std::size_t c = 0; c < 2; ++c) {
    q.envelope_depth.push_back(
        envelope_depth(sep.components.channel(c), mixed.sample_rate(), freqs[c], freqs[1 - c]));
    quality.set("input.envelope_depth_ch" + std::to_string(c),
                envelope_depth(mixed.channel(c), mixed.sample_rate(), freqs[c], freqs[1 - c]));
  }
  if (manifest) {
    const auto truth_cfg = config_from_manifest(*manifest);
    const auto scen = generate_scenario(truth_cfg.scenario);
    if (scen.clean.length() != mixed.length())
      throw InvalidArgument("unmix: manifest describes " + std::to_string(scen.clean.length()) +
                            " samples, input has " + std::to_string(mixed.length()));
    for (std::size_t c = 0; c < 2; ++c) {
      const auto est = sep.components.channel(c);
      const auto truth = scen.clean.channel(c);
      q.isr_db.push_back(isr(est, truth));
      // SNR of the best-fit source copy against everything else.
      double et = 0.0, tt = 0.0;
      for (std::size_t k = 0; k < truth.size(); ++k) {
        et += est[k] * truth[k];
        tt += truth[k] * truth[k];
      }
      std::vector<double> sig(truth.size()), err(truth.size());
      for (std::size_t k = 0; k < truth.size(); ++k) {
        sig[k] = et / tt * truth[k];
        err[k] = est[k] - sig[k];
      }
      q.snr_db.push_back(snr(sig, err));
    }
    q.gain_matrix = gain_matrix(sep.result.w_full, truth_cfg.scenario.coupling, channel_std(scen.clean));
  }
  write_quality(quality, q);
  put(out_dir / "quality.txt", quality, log);

  if (!sep.result.all_converged()) {
    log << "fastICA did not converge within " << cfg.ica.max_iter << " iterations\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int cmd_density(const RunConfig& cfg, const fs::path& in, const std::optional<fs::path>& manifest,
                const fs::path& out_dir, std::ostream& log) {
  cfg.validate();
  ensure_dir(out_dir);
  const auto sig = read_signal(in);
  const auto& p = cfg.scenario.params;
  const auto rec = recover_density(sig, p, cfg.demod.resolve(p.f_het1, p.f_het2, p.sample_rate),
                                   cfg.demod.resolve(p.f_het2, p.f_het1, p.sample_rate));

  put(out_dir / "density.csv", to_signal(rec.density), log);
  put(out_dir / "phase.csv",
      MultichannelSignal::from_channels({rec.ch1.phase.samples, rec.ch2.phase.samples}, rec.ch1.phase.sample_rate),
      log);

  const std::size_t n = rec.density.samples.size();
  const std::size_t settle = rec.density.settle;
  std::size_t lost = 0;
  for (const auto& r : rec.lost) {
    const std::size_t lo = std::max(r.first, settle);
    const std::size_t hi = std::min(r.last + 1, n - settle);
    if (hi > lo) lost += hi - lo;
  }
  const std::size_t usable = n > 2 * settle ? n - 2 * settle : 0;
  const char* status = rec.lost.empty() ? "ok" : (lost >= usable ? "failed" : "partial");

  KeyValueDoc report;
  report.set("density.status", status);
  report.set("density.samples", std::to_string(n));
  report.set("density.sample_rate", rec.density.sample_rate);
  report.set("density.settle", std::to_string(settle));
  report.set("density.reference", std::to_string(rec.reference));
  report.set("density.lost_ranges", format_ranges(rec.lost));
  report.set("density.lost_samples", std::to_string(lost));
  if (manifest && rec.lost.empty()) {
    const auto truth_cfg = config_from_manifest(*manifest);
    const auto tracks = make_scenario_tracks(truth_cfg.scenario.kind, truth_cfg.scenario.n,
                                             truth_cfg.scenario.params, truth_cfg.scenario.shape);
    const std::size_t dec = cfg.demod.resolve(p.f_het1, p.f_het2, p.sample_rate).decimation;
    const auto truth = reference_truth(tracks.density, dec, n, rec.reference);
    std::vector<double> s, e;
    double peak = 0.0;
    for (std::size_t k = settle; k + settle < n; ++k) {
      s.push_back(truth[k]);
      e.push_back(rec.density.samples[k] - truth[k]);
      peak = std::max(peak, std::abs(truth[k]));
    }
    if (peak > 0.0) {
      report.set("density.relative_rms_error", relative_rms_error(rec.density.samples, truth, settle));
      report.set("density.snr_db", snr(s, e).to_string());
    } else {
      double worst = 0.0;
      for (double v : e) worst = std::max(worst, std::abs(v));
      report.set("density.max_abs_error", worst);
    }
  }
  put(out_dir / "density_report.txt", report, log);

  if (rec.lost.empty()) return kExitOk;
  log << "phase tracking lost in " << rec.lost.size() << " range(s), " << lost << " of " << usable
      << " settled samples\n";
  return lost >= usable ? kExitNumeric : kExitPartial;
}

int cmd_diplex(const RunConfig& cfg, const std::optional<fs::path>& in, const fs::path& out_dir, std::ostream& log) {
  cfg.validate();
  ensure_dir(out_dir);
  DiplexConfig dc = cfg.diplex;
  dc.ica = cfg.ica;

  MultichannelSignal composite = [&] {
    if (in) return read_signal(*in);
    const auto& d = cfg.diplex_input;
    std::vector<double> x(d.n);
    for (std::size_t k = 0; k < d.n; ++k) {
      const double t = static_cast<double>(k) / d.sample_rate;
      x[k] = d.amplitude_a * std::sin(2 * std::numbers::pi * dc.f_a * t) +
             d.amplitude_b * std::sin(2 * std::numbers::pi * dc.f_b * t);
    }
    return MultichannelSignal::single(x, d.sample_rate);
  }();
  if (composite.channels() != 1)
    throw InvalidArgument("diplex: expected a single-channel composite, got " +
                          std::to_string(composite.channels()) + " channels");
  if (!in) put(out_dir / "composite.icdx", composite, log);

  const double fs = composite.sample_rate();
  const auto r = diplex(composite.channel(0), fs, dc);
  put(out_dir / "diplex_a.icdx", MultichannelSignal::single(r.output.channel(0), fs), log);
  put(out_dir / "diplex_b.icdx", MultichannelSignal::single(r.output.channel(1), fs), log);

  KeyValueDoc report;
  const std::array<double, 2> f{dc.f_a, dc.f_b};
  const std::array<const char*, 2> tag{"a", "b"};
  for (std::size_t c = 0; c < 2; ++c) {
    const std::string k = std::string("diplex_report.") + tag[c] + ".";
    report.set(k + "freq", f[c]);
    report.set(k + "fir_only_residual_db", cross_tone_residual(r.fir_only.channel(c), fs, f[c], f[1 - c]).to_string());
    report.set(k + "residual_db", cross_tone_residual(r.output.channel(c), fs, f[c], f[1 - c]).to_string());
    report.set(k + "mean", mean_of(r.output.channel(c)));
    report.set(k + "peak", peak_of(r.output.channel(c)));
    report.set(k + "taps", format_list(c == 0 ? r.filter_a.taps : r.filter_b.taps));
  }
  report.set("diplex_report.dropped", std::to_string(r.dropped));
  write_separation(report, r.separation, "diplex_report.separation.");
  put(out_dir / "diplex_report.txt", report, log);
  put(out_dir / "diplex_manifest.txt", to_doc(cfg), log);
  return kExitOk;
}

int cmd_report(const fs::path& out_dir, std::ostream& out) {
  KeyValueDoc merged;
  int found = 0;
  for (const char* name : {"manifest.txt", "separation.txt", "quality.txt", "density_report.txt", "diplex_report.txt"}) {
    const auto path = out_dir / name;
    if (!fs::exists(path)) continue;
    ++found;
    const auto doc = KeyValueDoc::load(path);
    for (const auto& e : doc.entries()) merged.set(e.key, e.value);
  }
  if (found == 0) throw IoError("report: no records found in " + out_dir.string());
  merged.save(out_dir / "report.txt");
  out << merged.str();
  if (fs::exists(out_dir / "quality.txt")) {
    const auto q = read_quality(KeyValueDoc::load(out_dir / "quality.txt"));
    write_file(out_dir / "quality.csv",
               quality_csv_header(q.envelope_depth.size()) + quality_csv_row(run_label(out_dir, merged), q));
  }
  return kExitOk;
}

}  // namespace xtalk::cli
