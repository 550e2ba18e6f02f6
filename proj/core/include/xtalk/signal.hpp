#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "xtalk/matrix.hpp"

namespace xtalk {

/// C channels x N samples of real waveform at a common sample rate.
///
/// Invariants (checked on construction): C >= 1, N >= 2, every sample
/// finite, sample_rate > 0.
class MultichannelSignal {
 public:
  MultichannelSignal(Matrix data, double sample_rate);

  static MultichannelSignal from_channels(const std::vector<std::vector<double>>& channels,
                                          double sample_rate);
  static MultichannelSignal single(std::span<const double> samples, double sample_rate);

  std::size_t channels() const noexcept { return data_.rows(); }
  std::size_t length() const noexcept { return data_.cols(); }
  double sample_rate() const noexcept { return sample_rate_; }

  const Matrix& data() const noexcept { return data_; }
  std::span<const double> channel(std::size_t c) const { return data_.row(c); }

  /// Sample time of index k.
  double time(std::size_t k) const noexcept { return static_cast<double>(k) / sample_rate_; }

  friend bool operator==(const MultichannelSignal&, const MultichannelSignal&) = default;

 private:
  Matrix data_;
  double sample_rate_;
};

}  // namespace xtalk
