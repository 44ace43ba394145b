#pragma once

#include <cstdio>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nowcast/core/forecast_record.hpp"

namespace nowcast::ingest {

/**
 * One record per line:
 *   ts=<rfc3339> model=<key> forecast=<num> actual=<num|open>
 *   squared_error=<num|nan> retrained=<true|false> train_mse=<num>
 *   window_start=<rfc3339>
 * Numbers carry 17 significant digits so records round-trip exactly.
 */
std::string format_record(const ForecastRecord& record);

/// Throws ParseError carrying `line`.
ForecastRecord parse_record(std::string_view text, std::size_t line = 0);

/// All records of a log, skipping blank lines. Throws IoError / ParseError.
std::vector<ForecastRecord> read_forecast_log(const std::filesystem::path& path);

/// Timestamp of the last record, or nothing for a missing or empty log.
std::optional<Timestamp> last_logged_timestamp(const std::filesystem::path& path);

/// Appends the records to the file, creating it if needed. Zero records
/// leave the file untouched. Throws IoError.
void append_forecast_log(const std::filesystem::path& path, std::span<const ForecastRecord> records);

/**
 * Append-only writer; each append() is flushed before returning. With
 * resume, records at or before the last logged timestamp are skipped, so
 * rerunning an interrupted session completes the log without duplicates.
 * Without resume the file is truncated on open.
 */
class ForecastLogWriter {
public:
    enum class Mode { truncate, resume };

    ForecastLogWriter(std::filesystem::path path, Mode mode);
    ~ForecastLogWriter();
    ForecastLogWriter(const ForecastLogWriter&) = delete;
    ForecastLogWriter& operator=(const ForecastLogWriter&) = delete;

    /// Returns how many records were written. Throws IoError.
    std::size_t append(std::span<const ForecastRecord> records);

    const std::filesystem::path& path() const noexcept { return path_; }
    std::optional<Timestamp> resume_after() const noexcept { return resume_after_; }
    std::size_t written() const noexcept { return written_; }

private:
    std::filesystem::path path_;
    std::FILE* file_ = nullptr;
    std::optional<Timestamp> resume_after_;
    std::size_t written_ = 0;
};

}  // namespace nowcast::ingest
