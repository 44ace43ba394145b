#include "nowcast/ingest/forecast_log.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>

#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast::ingest {

namespace {

std::string num(double v) { return std::isnan(v) ? "nan" : fmt::format("{:.17g}", v); }

double parse_num(std::string_view s, std::string_view key, std::size_t line) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ParseError(fmt::format("{}='{}' is not a number", key, s), line);
    }
    return v;
}

constexpr const char* kKeys[] = {"ts",        "model",     "forecast",  "actual",
                                 "squared_error", "retrained", "train_mse", "window_start"};

}  // namespace

std::string format_record(const ForecastRecord& r) {
    return fmt::format("ts={} model={} forecast={} actual={} squared_error={} retrained={} train_mse={} window_start={}",
                       format_rfc3339(r.timestamp), family_key(r.family), num(r.forecast),
                       r.actual ? num(*r.actual) : std::string("open"), num(r.squared_error),
                       r.retrained ? "true" : "false", num(r.train_mse), format_rfc3339(r.window_start));
}

ForecastRecord parse_record(std::string_view text, std::size_t line) {
    while (!text.empty() && (text.back() == '\r' || text.back() == ' ')) text.remove_suffix(1);
    std::string_view values[std::size(kKeys)];
    std::size_t pos = 0;
    for (std::size_t k = 0; k < std::size(kKeys); ++k) {
        if (pos > text.size()) throw ParseError(fmt::format("missing field '{}'", kKeys[k]), line);
        const auto end = std::min(text.find(' ', pos), text.size());
        const auto item = text.substr(pos, end - pos);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos || item.substr(0, eq) != kKeys[k]) {
            throw ParseError(fmt::format("expected key '{}' at field {}", kKeys[k], k + 1), line);
        }
        values[k] = item.substr(eq + 1);
        pos = end + 1;
    }
    if (pos < text.size()) throw ParseError("trailing fields", line);

    ForecastRecord r;
    try {
        r.timestamp = parse_rfc3339(values[0]);
        r.window_start = parse_rfc3339(values[7]);
        r.family = parse_family(values[1]);
    } catch (const Error& e) {
        throw ParseError(e.what(), line);
    }
    r.forecast = parse_num(values[2], "forecast", line);
    if (values[3] != "open") r.actual = parse_num(values[3], "actual", line);
    r.squared_error = parse_num(values[4], "squared_error", line);
    if (values[5] == "true") {
        r.retrained = true;
    } else if (values[5] != "false") {
        throw ParseError(fmt::format("retrained='{}' is not true/false", values[5]), line);
    }
    r.train_mse = parse_num(values[6], "train_mse", line);
    return r;
}

std::vector<ForecastRecord> read_forecast_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open log '{}'", path.string()));
    std::vector<ForecastRecord> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \r\t") == std::string::npos) continue;
        out.push_back(parse_record(line, n));
    }
    return out;
}

std::optional<Timestamp> last_logged_timestamp(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return std::nullopt;
    const auto records = read_forecast_log(path);
    if (records.empty()) return std::nullopt;
    auto last = records.front().timestamp;
    for (const auto& r : records) last = std::max(last, r.timestamp);
    return last;
}

void append_forecast_log(const std::filesystem::path& path, std::span<const ForecastRecord> records) {
    if (records.empty()) return;
    std::FILE* f = std::fopen(path.c_str(), "ab");
    if (!f) throw IoError(fmt::format("cannot open log '{}': {}", path.string(), std::strerror(errno)));
    std::string text;
    for (const auto& r : records) text += format_record(r) + "\n";
    const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
    const bool closed = std::fclose(f) == 0;
    if (!ok || !closed) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

ForecastLogWriter::ForecastLogWriter(std::filesystem::path path, Mode mode) : path_(std::move(path)) {
    if (mode == Mode::resume) resume_after_ = last_logged_timestamp(path_);
    file_ = std::fopen(path_.c_str(), mode == Mode::resume ? "ab" : "wb");
    if (!file_) throw IoError(fmt::format("cannot open log '{}': {}", path_.string(), std::strerror(errno)));
}

ForecastLogWriter::~ForecastLogWriter() {
    if (file_) std::fclose(file_);
}

std::size_t ForecastLogWriter::append(std::span<const ForecastRecord> records) {
    std::size_t count = 0;
    for (const auto& r : records) {
        if (resume_after_ && r.timestamp <= *resume_after_) continue;
        const auto line = format_record(r) + "\n";
        if (std::fwrite(line.data(), 1, line.size(), file_) != line.size()) {
            throw IoError(fmt::format("write to '{}' failed: {}", path_.string(), std::strerror(errno)));
        }
        ++count;
    }
    if (std::fflush(file_) != 0) {
        throw IoError(fmt::format("flush of '{}' failed: {}", path_.string(), std::strerror(errno)));
    }
    written_ += count;
    return count;
}

}  // namespace nowcast::ingest
