#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xtalk/demod.hpp"
#include "xtalk/matrix.hpp"

namespace xtalk {

/// A decibel figure that may be an explicit +-infinity sentinel
/// (zero residual / zero noise). Serialized as a word, never as inf.
struct Decibels {
  enum class Kind { Finite, NegInf, PosInf };
  Kind kind = Kind::Finite;
  double value = 0.0;

  static Decibels finite(double v) { return {Kind::Finite, v}; }
  static Decibels neg_inf() { return {Kind::NegInf, 0.0}; }
  static Decibels pos_inf() { return {Kind::PosInf, 0.0}; }
  static Decibels from_ratio(double ratio);

  bool is_finite() const { return kind == Kind::Finite; }
  /// Numeric view for comparisons: sentinels map to -+infinity.
  double as_double() const;
  std::string to_string() const;
  static Decibels parse(const std::string& text);

  friend bool operator==(const Decibels&, const Decibels&) = default;
};

/// Interference-to-signal ratio of an estimate against the true source.
/// The best scalar fit c* = <est, truth> / <truth, truth> absorbs scale and
/// sign; ISR = 10 log10(P(est - c* truth) / P(c* truth)).
Decibels isr(std::span<const double> estimated, std::span<const double> truth);

/// 10 log10(P_signal / P_noise); zero noise gives the +inf sentinel.
Decibels snr(std::span<const double> signal, std::span<const double> noise_reference);

/// Beat-envelope depth (max - min) / (max + min) of the IQ magnitude rail
/// over the settled region. The minimum is taken over the piecewise-linear
/// complex baseband so nulls between samples are not missed.
double envelope_depth(std::span<const double> channel, double sample_rate, const DemodSettings& s);
double envelope_depth(std::span<const double> channel, double sample_rate, double carrier,
                      double other_carrier);

/// W_full A diag(source_std): gains from standardized sources to outputs.
/// Ideal separation is a signed permutation.
Matrix gain_matrix(const Matrix& w_full, const Matrix& mixing, std::span<const double> source_std);

/// True when every row has exactly one |entry| > hi and the rest < lo.
bool is_signed_permutation(const Matrix& g, double hi, double lo);

/// Power at f_other relative to power at f_own from a joint tone fit.
Decibels cross_tone_residual(std::span<const double> x, double sample_rate, double f_own, double f_other);

struct QualityReport {
  std::vector<Decibels> isr_db;
  std::vector<Decibels> snr_db;
  std::optional<Matrix> gain_matrix;
  std::vector<double> envelope_depth;
};

}  // namespace xtalk
