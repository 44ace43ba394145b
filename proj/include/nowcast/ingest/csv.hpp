#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

#include "nowcast/core/series.hpp"

namespace nowcast::ingest {

inline constexpr const char* kCsvHeader = "timestamp,symbol,close";

/**
 * Reads `timestamp,symbol,close` rows (RFC 3339 timestamps, one symbol per
 * file). Rows are sorted by time on load.
 *
 * Throws IoError if the file cannot be opened, ParseError (with line number)
 * for a bad header, malformed row or mixed symbols, DomainError for a
 * non-positive or non-finite close, OrderingError for duplicate timestamps.
 */
PriceSeries read_series_csv(const std::filesystem::path& path);
PriceSeries parse_series_csv(std::istream& in);

/// Shortest round-trip decimal for each close. Throws IoError.
void write_series_csv(const std::filesystem::path& path, const PriceSeries& series);
void write_series_csv(std::ostream& out, const PriceSeries& series);

}  // namespace nowcast::ingest
