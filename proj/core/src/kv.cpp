#include "xtalk/kv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "xtalk/error.hpp"

namespace xtalk {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
    throw ConfigError("not a number: '" + std::string(text) + "'");
  return v;
}

long long parse_int(std::string_view text) {
  text = trim(text);
  long long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
    throw ConfigError("not an integer: '" + std::string(text) + "'");
  return v;
}

std::string format_list(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (auto item : split(text, ',')) out.push_back(parse_double(item));
  return out;
}

std::string format_matrix(const Matrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r) out += ';';
    out += format_list(m.row(r));
  }
  return out;
}

Matrix parse_matrix(std::string_view text) {
  const auto rows = split(text, ';');
  std::vector<std::vector<double>> values;
  for (auto r : rows) values.push_back(parse_list(r));
  if (values.empty() || values.front().empty()) throw ConfigError("empty matrix '" + std::string(text) + "'");
  Matrix m(values.size(), values.front().size());
  for (std::size_t r = 0; r < values.size(); ++r) {
    if (values[r].size() != m.cols()) throw ConfigError("ragged matrix '" + std::string(text) + "'");
    std::copy(values[r].begin(), values[r].end(), m.row(r).begin());
  }
  return m;
}

KeyValueDoc KeyValueDoc::parse(std::string_view text, std::string_view origin) {
  KeyValueDoc doc;
  doc.origin_ = std::string(origin);
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto raw = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++line_no;
    const auto line = trim(raw);
    if (!line.empty() && line.front() != '#') {
      const auto eq = line.find('=');
      const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
      if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
      const auto key = trim(line.substr(0, eq));
      if (key.empty()) throw ConfigError(where + "empty key");
      if (doc.contains(key)) throw ConfigError(where + "duplicate key '" + std::string(key) + "'");
      doc.entries_.push_back({std::string(key), std::string(trim(line.substr(eq + 1))), line_no});
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return doc;
}

KeyValueDoc KeyValueDoc::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void KeyValueDoc::set(std::string key, std::string value) {
  for (auto& e : entries_) {
    if (e.key == key) {
      e.value = std::move(value);
      e.line = 0;
      return;
    }
  }
  entries_.push_back({std::move(key), std::move(value), 0});
}

bool KeyValueDoc::contains(std::string_view key) const { return get(key).has_value(); }

std::optional<std::string> KeyValueDoc::get(std::string_view key) const {
  for (const auto& e : entries_)
    if (e.key == key) return e.value;
  return std::nullopt;
}

const std::string& KeyValueDoc::at(std::string_view key) const {
  for (const auto& e : entries_)
    if (e.key == key) return e.value;
  throw ConfigError(origin_ + ": missing key '" + std::string(key) + "'");
}

int KeyValueDoc::line_of(std::string_view key) const {
  for (const auto& e : entries_)
    if (e.key == key) return e.line;
  return 0;
}

std::string KeyValueDoc::str() const {
  std::string out;
  for (const auto& e : entries_) out += e.key + " = " + e.value + "\n";
  return out;
}

void KeyValueDoc::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << str();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace xtalk
