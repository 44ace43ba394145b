#include "nowcast/ingest/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast::ingest {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_close(std::string_view text, std::size_t line) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ParseError(fmt::format("close '{}' is not a number", text), line);
    }
    return v;
}

}  // namespace

PriceSeries parse_series_csv(std::istream& in) {
    std::string raw;
    std::size_t line = 0;
    bool header_seen = false;
    std::string symbol;
    std::vector<std::pair<PricePoint, std::size_t>> rows;

    while (std::getline(in, raw)) {
        ++line;
        const auto text = trim(raw);
        if (text.empty()) continue;
        if (!header_seen) {
            if (text != kCsvHeader) {
                throw ParseError(fmt::format("expected header '{}', got '{}'", kCsvHeader, text), line);
            }
            header_seen = true;
            continue;
        }
        const auto c1 = text.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : text.find(',', c1 + 1);
        if (c2 == std::string_view::npos || text.find(',', c2 + 1) != std::string_view::npos) {
            throw ParseError("expected 3 comma-separated fields", line);
        }
        const auto ts_text = trim(text.substr(0, c1));
        const auto sym = trim(text.substr(c1 + 1, c2 - c1 - 1));
        const auto close_text = trim(text.substr(c2 + 1));

        Timestamp ts;
        try {
            ts = parse_rfc3339(ts_text);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line);
        }
        if (sym.empty()) throw ParseError("empty symbol", line);
        if (symbol.empty()) {
            symbol = std::string(sym);
        } else if (sym != symbol) {
            throw ParseError(fmt::format("symbol '{}' differs from '{}'", sym, symbol), line);
        }
        const double close = parse_close(close_text, line);
        if (!std::isfinite(close) || close <= 0.0) {
            throw DomainError(fmt::format("line {}: close must be finite and > 0, got {}", line, close_text));
        }
        rows.push_back({{ts, close}, line});
    }
    if (!header_seen) throw ParseError("missing header", line == 0 ? 1 : line);

    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first.timestamp < b.first.timestamp; });
    std::vector<PricePoint> points;
    points.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].first.timestamp == rows[i - 1].first.timestamp) {
            throw OrderingError(fmt::format("duplicate timestamp {} on lines {} and {}",
                                            format_rfc3339(rows[i].first.timestamp), rows[i - 1].second,
                                            rows[i].second));
        }
        points.push_back(rows[i].first);
    }
    return PriceSeries(symbol, std::move(points));
}

PriceSeries read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
    return parse_series_csv(in);
}

void write_series_csv(std::ostream& out, const PriceSeries& series) {
    out << kCsvHeader << '\n';
    for (const auto& p : series.points()) {
        out << fmt::format("{},{},{}\n", format_rfc3339(p.timestamp), series.symbol(), p.close);
    }
}

void write_series_csv(const std::filesystem::path& path, const PriceSeries& series) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
    write_series_csv(out, series);
    out.flush();
    if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace nowcast::ingest
