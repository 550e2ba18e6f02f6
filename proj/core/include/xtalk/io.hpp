#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "xtalk/demod.hpp"
#include "xtalk/signal.hpp"

namespace xtalk {

/// Raw signal file: 64-byte little-endian header followed by
/// channel-interleaved little-endian float64 samples.
///
///   offset  size  field
///   0       4     magic "ICDX"
///   4       4     version (u32) = 1
///   8       4     channels (u32)
///   12      8     length per channel (u64)
///   20      8     sample_rate (f64)
///   28      36    reserved, zero
inline constexpr std::uint32_t kRawVersion = 1;
inline constexpr std::size_t kRawHeaderSize = 64;

std::string encode_raw(const MultichannelSignal& s);
MultichannelSignal decode_raw(const std::string& bytes, const std::string& origin = "<bytes>");

/// CSV: header `t,ch0,ch1,...`, one row per sample, t = k / fs. Values use
/// the shortest round-trip decimal form, so CSV is lossless too.
std::string encode_csv(const MultichannelSignal& s);
MultichannelSignal decode_csv(const std::string& text, const std::string& origin = "<csv>");

/// Format chosen by extension: ".csv" is CSV, anything else raw.
void write_signal(const std::filesystem::path& path, const MultichannelSignal& s);
/// Format sniffed from the magic bytes.
MultichannelSignal read_signal(const std::filesystem::path& path);

MultichannelSignal to_signal(const PhaseSeries& p);
MultichannelSignal to_signal(const DensitySeries& d);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace xtalk
