#pragma once

#include <string>
#include <string_view>

#include "xtalk/fastica.hpp"
#include "xtalk/kv.hpp"
#include "xtalk/metrics.hpp"
#include "xtalk/preprocess.hpp"

namespace xtalk {

// Key-value encodings of the pipeline records. Every key carries the given
// prefix, so several records can share one document.

void write_whitening(KeyValueDoc& doc, const WhiteningTransform& t, std::string_view prefix = "whitening.");
WhiteningTransform read_whitening(const KeyValueDoc& doc, std::string_view prefix = "whitening.");

void write_separation(KeyValueDoc& doc, const SeparationResult& r, std::string_view prefix = "separation.");
SeparationResult read_separation(const KeyValueDoc& doc, std::string_view prefix = "separation.");

void write_quality(KeyValueDoc& doc, const QualityReport& q, std::string_view prefix = "quality.");
QualityReport read_quality(const KeyValueDoc& doc, std::string_view prefix = "quality.");

/// One CSV row per run for batch sweeps: label, isr/snr/depth per channel.
std::string quality_csv_header(std::size_t channels);
std::string quality_csv_row(std::string_view label, const QualityReport& q);

}  // namespace xtalk
