#include "xtalk/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "xtalk/error.hpp"
#include "xtalk/kv.hpp"

namespace xtalk {

static_assert(std::endian::native == std::endian::little, "raw signal I/O assumes a little-endian host");

namespace {

template <typename T>
void put(std::string& out, std::size_t offset, T v) {
  std::memcpy(out.data() + offset, &v, sizeof v);
}

template <typename T>
T get(const std::string& in, std::size_t offset) {
  T v;
  std::memcpy(&v, in.data() + offset, sizeof v);
  return v;
}

// The writer emits t = k / fs; find the rate that reproduces those stamps
// exactly so CSV round trips do not drift by an ulp.
double recover_rate(const std::vector<double>& t) {
  const std::size_t last = t.size() - 1;
  const double guesses[2] = {1.0 / (t[1] - t[0]), static_cast<double>(last) / (t[last] - t[0])};
  for (double g : guesses) {
    double cand = g;
    for (int i = 0; i < 4; ++i) cand = std::nextafter(cand, 0.0);
    for (int i = 0; i < 9; ++i, cand = std::nextafter(cand, HUGE_VAL))
      if (t[0] == 0.0 && 1.0 / cand == t[1] && static_cast<double>(last) / cand == t[last]) return cand;
  }
  return guesses[1];
}

}  // namespace

std::string encode_raw(const MultichannelSignal& s) {
  const std::size_t c = s.channels(), n = s.length();
  std::string out(kRawHeaderSize + c * n * sizeof(double), '\0');
  std::memcpy(out.data(), "ICDX", 4);
  put<std::uint32_t>(out, 4, kRawVersion);
  put<std::uint32_t>(out, 8, static_cast<std::uint32_t>(c));
  put<std::uint64_t>(out, 12, static_cast<std::uint64_t>(n));
  put<double>(out, 20, s.sample_rate());
  std::size_t off = kRawHeaderSize;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t ch = 0; ch < c; ++ch, off += sizeof(double)) put<double>(out, off, s.data()(ch, k));
  return out;
}

MultichannelSignal decode_raw(const std::string& bytes, const std::string& origin) {
  if (bytes.size() < kRawHeaderSize || std::memcmp(bytes.data(), "ICDX", 4) != 0)
    throw IoError(origin + ": not an ICDX signal file");
  const auto version = get<std::uint32_t>(bytes, 4);
  if (version != kRawVersion) throw IoError(origin + ": unsupported ICDX version " + std::to_string(version));
  const auto c = get<std::uint32_t>(bytes, 8);
  const auto n = get<std::uint64_t>(bytes, 12);
  const auto fs = get<double>(bytes, 20);
  if (c == 0 || n > (bytes.size() - kRawHeaderSize) / sizeof(double) ||
      bytes.size() != kRawHeaderSize + static_cast<std::size_t>(c) * n * sizeof(double))
    throw IoError(origin + ": ICDX payload size does not match header");
  Matrix m(c, n);
  std::size_t off = kRawHeaderSize;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t ch = 0; ch < c; ++ch, off += sizeof(double)) m(ch, k) = get<double>(bytes, off);
  try {
    return {std::move(m), fs};
  } catch (const InvalidArgument& e) {
    throw IoError(origin + ": " + e.what());
  }
}

std::string encode_csv(const MultichannelSignal& s) {
  std::string out = "t";
  for (std::size_t c = 0; c < s.channels(); ++c) out += ",ch" + std::to_string(c);
  out += '\n';
  for (std::size_t k = 0; k < s.length(); ++k) {
    out += format_double(s.time(k));
    for (std::size_t c = 0; c < s.channels(); ++c) {
      out += ',';
      out += format_double(s.data()(c, k));
    }
    out += '\n';
  }
  return out;
}

MultichannelSignal decode_csv(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError(origin + ": empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::size_t channels = 0;
  {
    std::istringstream hs(line);
    std::string cell;
    std::size_t i = 0;
    while (std::getline(hs, cell, ',')) {
      const std::string expect = i == 0 ? "t" : "ch" + std::to_string(i - 1);
      if (cell != expect) throw IoError(origin + ": bad CSV header (expected '" + expect + "')");
      ++i;
    }
    if (i < 2) throw IoError(origin + ": CSV needs a t column and at least one channel");
    channels = i - 1;
  }
  std::vector<std::vector<double>> cols(channels);
  std::vector<double> times;
  int line_no = 1;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto cells = parse_list(line);
      if (cells.size() != channels + 1)
        throw IoError(origin + ":" + std::to_string(line_no) + ": wrong column count");
      times.push_back(cells[0]);
      for (std::size_t c = 0; c < channels; ++c) cols[c].push_back(cells[c + 1]);
    }
  } catch (const ConfigError& e) {
    throw IoError(origin + ":" + std::to_string(line_no) + ": " + e.what());
  }
  if (times.size() < 2) throw IoError(origin + ": CSV needs at least 2 samples");
  const double fs = recover_rate(times);
  try {
    return MultichannelSignal::from_channels(cols, fs);
  } catch (const InvalidArgument& e) {
    throw IoError(origin + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void write_signal(const std::filesystem::path& path, const MultichannelSignal& s) {
  write_file(path, path.extension() == ".csv" ? encode_csv(s) : encode_raw(s));
}

MultichannelSignal read_signal(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), "ICDX", 4) == 0) return decode_raw(bytes, path.string());
  return decode_csv(bytes, path.string());
}

MultichannelSignal to_signal(const PhaseSeries& p) { return MultichannelSignal::single(p.samples, p.sample_rate); }
MultichannelSignal to_signal(const DensitySeries& d) { return MultichannelSignal::single(d.samples, d.sample_rate); }

}  // namespace xtalk
