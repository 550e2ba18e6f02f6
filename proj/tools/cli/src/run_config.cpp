#include "xtalk_cli/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <type_traits>

#include "xtalk/error.hpp"

namespace xtalk::cli {

namespace {

struct Field {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

std::size_t parse_size(const std::string& v) {
  const long long x = parse_int(v);
  if (x < 0) throw ConfigError("expected a non-negative integer, got '" + v + "'");
  return static_cast<std::size_t>(x);
}


template <typename Get>
Field number(std::string key, Get ref) {
  return {std::move(key), [ref](const RunConfig& c) { return format_double(ref(c)); },
          [ref](RunConfig& c, const std::string& v) { ref(c) = parse_double(v); }};
}

template <typename Get>
Field count(std::string key, Get ref) {
  return {std::move(key), [ref](const RunConfig& c) { return std::to_string(ref(c)); },
          [ref](RunConfig& c, const std::string& v) {
            using T = std::remove_reference_t<decltype(ref(c))>;
            ref(c) = static_cast<T>(std::is_signed_v<T> ? parse_int(v) : static_cast<long long>(parse_size(v)));
          }};
}

template <typename Get>
Field list(std::string key, Get ref) {
  return {std::move(key), [ref](const RunConfig& c) { return format_list(ref(c)); },
          [ref](RunConfig& c, const std::string& v) { ref(c) = parse_list(v); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"scenario.kind", [](const RunConfig& c) { return std::string(to_string(c.scenario.kind)); },
                 [](RunConfig& c, const std::string& v) { c.scenario.kind = parse_scenario_kind(v); }});
    f.push_back(count("scenario.n", [](auto& c) -> auto& { return c.scenario.n; }));
    f.push_back(count("scenario.seed", [](auto& c) -> auto& { return c.scenario.seed; }));
    f.push_back({"scenario.coupling", [](const RunConfig& c) { return format_matrix(c.scenario.coupling); },
                 [](RunConfig& c, const std::string& v) { c.scenario.coupling = parse_matrix(v); }});
    f.push_back({"scenario.snr_db",
                 [](const RunConfig& c) {
                   return std::isinf(c.scenario.snr_db) ? std::string("none") : format_double(c.scenario.snr_db);
                 },
                 [](RunConfig& c, const std::string& v) { c.scenario.snr_db = v == "none" ? kNoNoise : parse_double(v); }});
    f.push_back(count("scenario.adc_bits", [](auto& c) -> auto& { return c.scenario.adc_bits; }));
    f.push_back(number("scenario.adc_full_scale", [](auto& c) -> auto& { return c.scenario.adc_full_scale; }));
    f.push_back(number("scenario.density_plateau", [](auto& c) -> auto& { return c.scenario.shape.density_plateau; }));
    f.push_back(number("scenario.ramp_start", [](auto& c) -> auto& { return c.scenario.shape.ramp_start; }));
    f.push_back(number("scenario.plateau_start", [](auto& c) -> auto& { return c.scenario.shape.plateau_start; }));
    f.push_back(number("scenario.plateau_end", [](auto& c) -> auto& { return c.scenario.shape.plateau_end; }));
    f.push_back(number("scenario.ramp_end", [](auto& c) -> auto& { return c.scenario.shape.ramp_end; }));
    f.push_back(list("scenario.vibration_amplitude", [](auto& c) -> auto& { return c.scenario.shape.vibration_amplitude; }));
    f.push_back(list("scenario.vibration_freq", [](auto& c) -> auto& { return c.scenario.shape.vibration_freq; }));
    f.push_back(list("scenario.vibration_phase", [](auto& c) -> auto& { return c.scenario.shape.vibration_phase; }));

    f.push_back(number("interferometer.lambda1", [](auto& c) -> auto& { return c.scenario.params.lambda1; }));
    f.push_back(number("interferometer.lambda2", [](auto& c) -> auto& { return c.scenario.params.lambda2; }));
    f.push_back(number("interferometer.f_het1", [](auto& c) -> auto& { return c.scenario.params.f_het1; }));
    f.push_back(number("interferometer.f_het2", [](auto& c) -> auto& { return c.scenario.params.f_het2; }));
    f.push_back(number("interferometer.sample_rate", [](auto& c) -> auto& { return c.scenario.params.sample_rate; }));
    f.push_back(number("interferometer.r_e", [](auto& c) -> auto& { return c.scenario.params.r_e; }));

    f.push_back({"ica.contrast", [](const RunConfig& c) { return std::string(to_string(c.ica.contrast)); },
                 [](RunConfig& c, const std::string& v) { c.ica.contrast = parse_contrast(v); }});
    f.push_back(number("ica.a", [](auto& c) -> auto& { return c.ica.a; }));
    f.push_back(count("ica.max_iter", [](auto& c) -> auto& { return c.ica.max_iter; }));
    f.push_back(number("ica.tol", [](auto& c) -> auto& { return c.ica.tol; }));
    f.push_back(count("ica.seed", [](auto& c) -> auto& { return c.ica.seed; }));
    f.push_back({"ica.ortho", [](const RunConfig& c) { return std::string(to_string(c.ica.ortho)); },
                 [](RunConfig& c, const std::string& v) { c.ica.ortho = parse_orthogonalization(v); }});

    f.push_back(number("demod.lowpass_cutoff", [](auto& c) -> auto& { return c.demod.lowpass_cutoff; }));
    f.push_back(count("demod.decimation", [](auto& c) -> auto& { return c.demod.decimation; }));
    f.push_back(count("demod.lowpass_order", [](auto& c) -> auto& { return c.demod.lowpass_order; }));
    f.push_back(number("demod.envelope_floor", [](auto& c) -> auto& { return c.demod.envelope_floor; }));

    f.push_back(number("diplex.f_a", [](auto& c) -> auto& { return c.diplex.f_a; }));
    f.push_back(number("diplex.f_b", [](auto& c) -> auto& { return c.diplex.f_b; }));
    f.push_back(count("diplex.order", [](auto& c) -> auto& { return c.diplex.order; }));
    f.push_back(number("diplex.band_fraction", [](auto& c) -> auto& { return c.diplex.band_fraction; }));
    f.push_back(number("diplex.sample_rate", [](auto& c) -> auto& { return c.diplex_input.sample_rate; }));
    f.push_back(count("diplex.n", [](auto& c) -> auto& { return c.diplex_input.n; }));
    f.push_back(number("diplex.amplitude_a", [](auto& c) -> auto& { return c.diplex_input.amplitude_a; }));
    f.push_back(number("diplex.amplitude_b", [](auto& c) -> auto& { return c.diplex_input.amplitude_b; }));
    return f;
  }();
  return table;
}

const Field* find(std::string_view key) {
  for (const auto& f : fields())
    if (f.key == key) return &f;
  return nullptr;
}

void apply_one(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& where) {
  const Field* f = find(key);
  if (!f) throw ConfigError(where + ": unknown key '" + key + "'");
  try {
    f->set(cfg, value);
  } catch (const Error& e) {
    throw ConfigError(where + ": " + key + ": " + e.what());
  }
}

}  // namespace

DemodSettings DemodOverrides::resolve(double carrier, double other_carrier, double sample_rate) const {
  auto s = default_demod_settings(carrier, other_carrier, sample_rate);
  if (lowpass_cutoff > 0.0) {
    s.lowpass_cutoff = lowpass_cutoff;
    s.decimation = std::max<std::size_t>(1, static_cast<std::size_t>(sample_rate / (6.0 * lowpass_cutoff)));
  }
  if (decimation > 0) s.decimation = decimation;
  s.lowpass_order = lowpass_order;
  s.envelope_floor = envelope_floor;
  return s;
}

void RunConfig::validate() const {
  try {
    scenario.params.validate();
    MixingModel model(scenario.coupling);
    if (model.size() != 2) throw InvalidArgument("scenario.coupling must be 2x2");
    if (scenario.n < 2) throw InvalidArgument("scenario.n must be at least 2");
    if (scenario.adc_bits != 0 && (scenario.adc_bits < 2 || scenario.adc_bits > 24))
      throw InvalidArgument("scenario.adc_bits must be 0 (off) or in [2, 24]");
    if (!(scenario.adc_full_scale > 0.0)) throw InvalidArgument("scenario.adc_full_scale must be positive");
    ica.validate();
    if (!(demod.envelope_floor > 0.0 && demod.envelope_floor < 1.0))
      throw InvalidArgument("demod.envelope_floor must lie in (0, 1)");
    if (demod.lowpass_cutoff < 0.0) throw InvalidArgument("demod.lowpass_cutoff must be >= 0");
    if (diplex_input.n < 2 || !(diplex_input.sample_rate > 0.0))
      throw InvalidArgument("diplex.n and diplex.sample_rate must be positive");
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
}

void apply(RunConfig& cfg, const KeyValueDoc& doc) {
  for (const auto& e : doc.entries())
    apply_one(cfg, e.key, e.value, doc.origin() + ":" + std::to_string(e.line));
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + assignment + "'");
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  apply_one(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), "--set");
}

KeyValueDoc to_doc(const RunConfig& cfg) {
  KeyValueDoc doc;
  for (const auto& f : fields()) doc.set(f.key, f.get(cfg));
  return doc;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

}  // namespace xtalk::cli
