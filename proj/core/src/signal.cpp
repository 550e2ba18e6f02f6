#include "xtalk/signal.hpp"

#include <cmath>
#include <string>

#include "xtalk/error.hpp"

namespace xtalk {

MultichannelSignal::MultichannelSignal(Matrix data, double sample_rate)
    : data_(std::move(data)), sample_rate_(sample_rate) {
  if (data_.rows() == 0) throw InvalidArgument("signal: no channels");
  if (data_.cols() < 2) throw InvalidArgument("signal: need at least 2 samples per channel");
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_))
    throw InvalidArgument("signal: sample rate must be positive and finite");
  for (std::size_t c = 0; c < data_.rows(); ++c)
    for (double v : data_.row(c))
      if (!std::isfinite(v))
        throw InvalidArgument("signal: non-finite sample in channel " + std::to_string(c));
}

MultichannelSignal MultichannelSignal::from_channels(
    const std::vector<std::vector<double>>& channels, double sample_rate) {
  if (channels.empty()) throw InvalidArgument("signal: no channels");
  Matrix m(channels.size(), channels.front().size());
  for (std::size_t c = 0; c < channels.size(); ++c) {
    if (channels[c].size() != m.cols()) throw InvalidArgument("signal: channels differ in length");
    std::copy(channels[c].begin(), channels[c].end(), m.row(c).begin());
  }
  return {std::move(m), sample_rate};
}

MultichannelSignal MultichannelSignal::single(std::span<const double> samples, double sample_rate) {
  Matrix m(1, samples.size());
  std::copy(samples.begin(), samples.end(), m.row(0).begin());
  return {std::move(m), sample_rate};
}

}  // namespace xtalk
