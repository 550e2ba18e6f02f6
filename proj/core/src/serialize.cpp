#include "xtalk/serialize.hpp"

#include "xtalk/error.hpp"

namespace xtalk {

namespace {

std::string key(std::string_view prefix, std::string_view name) {
  return std::string(prefix) + std::string(name);
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  if (!s.empty()) out.push_back(cur);
  return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += f(v[i]);
  }
  return out;
}

}  // namespace

void write_whitening(KeyValueDoc& doc, const WhiteningTransform& t, std::string_view prefix) {
  doc.set(key(prefix, "mean"), format_list(t.mean));
  doc.set(key(prefix, "eigvals"), format_list(t.eigvals));
  doc.set(key(prefix, "eigvecs"), format_matrix(t.eigvecs));
  doc.set(key(prefix, "whitener"), format_matrix(t.whitener));
  doc.set(key(prefix, "dewhitener"), format_matrix(t.dewhitener));
}

WhiteningTransform read_whitening(const KeyValueDoc& doc, std::string_view prefix) {
  WhiteningTransform t;
  t.mean = parse_list(doc.at(key(prefix, "mean")));
  t.eigvals = parse_list(doc.at(key(prefix, "eigvals")));
  t.eigvecs = parse_matrix(doc.at(key(prefix, "eigvecs")));
  t.whitener = parse_matrix(doc.at(key(prefix, "whitener")));
  t.dewhitener = parse_matrix(doc.at(key(prefix, "dewhitener")));
  const std::size_t c = t.mean.size();
  if (t.eigvals.size() != c || t.whitener.rows() != c || t.whitener.cols() != c || t.dewhitener.rows() != c)
    throw ConfigError(doc.origin() + ": inconsistent whitening record dimensions");
  return t;
}

void write_separation(KeyValueDoc& doc, const SeparationResult& r, std::string_view prefix) {
  doc.set(key(prefix, "w"), format_matrix(r.w));
  doc.set(key(prefix, "w_full"), format_matrix(r.w_full));
  doc.set(key(prefix, "iterations"), join(r.iterations, [](int v) { return std::to_string(v); }));
  std::vector<bool> conv(r.converged.begin(), r.converged.end());
  doc.set(key(prefix, "converged"), join(conv, [](bool v) { return std::string(v ? "true" : "false"); }));
  doc.set(key(prefix, "assignment.order"),
          join(r.assignment.order, [](std::size_t v) { return std::to_string(v); }));
  doc.set(key(prefix, "assignment.sign"), join(r.assignment.sign, [](int v) { return std::to_string(v); }));
}

SeparationResult read_separation(const KeyValueDoc& doc, std::string_view prefix) {
  SeparationResult r;
  r.w = parse_matrix(doc.at(key(prefix, "w")));
  r.w_full = parse_matrix(doc.at(key(prefix, "w_full")));
  for (const auto& s : split_words(doc.at(key(prefix, "iterations")))) r.iterations.push_back(static_cast<int>(parse_int(s)));
  for (const auto& s : split_words(doc.at(key(prefix, "converged")))) {
    if (s != "true" && s != "false") throw ConfigError(doc.origin() + ": converged flags must be true/false");
    r.converged.push_back(s == "true");
  }
  for (const auto& s : split_words(doc.at(key(prefix, "assignment.order"))))
    r.assignment.order.push_back(static_cast<std::size_t>(parse_int(s)));
  for (const auto& s : split_words(doc.at(key(prefix, "assignment.sign"))))
    r.assignment.sign.push_back(static_cast<int>(parse_int(s)));
  const std::size_t c = r.w.rows();
  if (r.iterations.size() != c || r.converged.size() != c || r.assignment.order.size() != c ||
      r.assignment.sign.size() != c)
    throw ConfigError(doc.origin() + ": inconsistent separation record dimensions");
  return r;
}

void write_quality(KeyValueDoc& doc, const QualityReport& q, std::string_view prefix) {
  auto db = [](const Decibels& d) { return d.to_string(); };
  doc.set(key(prefix, "isr_db"), join(q.isr_db, db));
  doc.set(key(prefix, "snr_db"), join(q.snr_db, db));
  doc.set(key(prefix, "envelope_depth"), format_list(q.envelope_depth));
  if (q.gain_matrix) doc.set(key(prefix, "gain_matrix"), format_matrix(*q.gain_matrix));
}

QualityReport read_quality(const KeyValueDoc& doc, std::string_view prefix) {
  QualityReport q;
  for (const auto& s : split_words(doc.at(key(prefix, "isr_db")))) q.isr_db.push_back(Decibels::parse(s));
  for (const auto& s : split_words(doc.at(key(prefix, "snr_db")))) q.snr_db.push_back(Decibels::parse(s));
  q.envelope_depth = parse_list(doc.at(key(prefix, "envelope_depth")));
  if (auto g = doc.get(key(prefix, "gain_matrix"))) q.gain_matrix = parse_matrix(*g);
  return q;
}

std::string quality_csv_header(std::size_t channels) {
  std::string out = "label";
  for (const char* field : {"isr_db", "snr_db", "envelope_depth"})
    for (std::size_t c = 0; c < channels; ++c) out += "," + std::string(field) + "_ch" + std::to_string(c);
  return out + "\n";
}

std::string quality_csv_row(std::string_view label, const QualityReport& q) {
  // Channel count follows envelope_depth; absent ground-truth figures stay empty.
  const std::size_t n = q.envelope_depth.size();
  std::string out(label);
  for (std::size_t c = 0; c < n; ++c) out += "," + (c < q.isr_db.size() ? q.isr_db[c].to_string() : "");
  for (std::size_t c = 0; c < n; ++c) out += "," + (c < q.snr_db.size() ? q.snr_db[c].to_string() : "");
  for (double v : q.envelope_depth) out += "," + format_double(v);
  return out + "\n";
}

}  // namespace xtalk
