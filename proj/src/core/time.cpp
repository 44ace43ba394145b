#include "nowcast/core/time.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast {
namespace {

using namespace std::chrono;

int parse_digits(std::string_view text, std::size_t pos, std::size_t count) {
    if (pos + count > text.size()) {
        throw ParseError(fmt::format("truncated timestamp '{}'", text));
    }
    int value = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
            throw ParseError(fmt::format("bad digit in timestamp '{}'", text));
        }
        value = value * 10 + (text[i] - '0');
    }
    return value;
}

void expect_char(std::string_view text, std::size_t pos, std::string_view allowed) {
    if (pos >= text.size() || allowed.find(text[pos]) == std::string_view::npos) {
        throw ParseError(fmt::format("malformed timestamp '{}'", text));
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Timestamp parse_rfc3339(std::string_view text) {
    text = trim(text);
    const int y = parse_digits(text, 0, 4);
    expect_char(text, 4, "-");
    const int mo = parse_digits(text, 5, 2);
    expect_char(text, 7, "-");
    const int d = parse_digits(text, 8, 2);
    expect_char(text, 10, "Tt ");
    const int h = parse_digits(text, 11, 2);
    expect_char(text, 13, ":");
    const int mi = parse_digits(text, 14, 2);
    expect_char(text, 16, ":");
    const int s = parse_digits(text, 17, 2);

    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 60) {
        throw ParseError(fmt::format("out-of-range field in timestamp '{}'", text));
    }

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    if (pos >= text.size()) {
        throw ParseError(fmt::format("timestamp '{}' lacks a UTC offset", text));
    }
    minutes offset{0};
    if (text[pos] == 'Z' || text[pos] == 'z') {
        ++pos;
    } else {
        expect_char(text, pos, "+-");
        const int sign = text[pos] == '-' ? -1 : 1;
        const int oh = parse_digits(text, pos + 1, 2);
        expect_char(text, pos + 3, ":");
        const int om = parse_digits(text, pos + 4, 2);
        offset = minutes{sign * (oh * 60 + om)};
        pos += 6;
    }
    if (pos != text.size()) {
        throw ParseError(fmt::format("trailing characters in timestamp '{}'", text));
    }
    const auto local = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
    return time_point_cast<seconds>(local - offset);
}

std::string format_rfc3339(Timestamp ts) { return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", ts); }

std::chrono::milliseconds parse_duration(std::string_view text) {
    text = trim(text);
    if (text.empty()) throw ParseError("empty duration");
    double scale = 1.0;
    switch (text.back()) {
    case 's': text.remove_suffix(1); break;
    case 'm': scale = 60.0; text.remove_suffix(1); break;
    case 'h': scale = 3600.0; text.remove_suffix(1); break;
    default: break;
    }
    if (text.size() >= 1 && text.back() == 'm') {
        // "ms"
        text.remove_suffix(1);
        scale = 1e-3;
    }
    double value = 0.0;
    const std::string buf(text);
    std::size_t used = 0;
    try {
        value = std::stod(buf, &used);
    } catch (const std::exception&) {
        throw ParseError(fmt::format("bad duration '{}'", buf));
    }
    if (used != buf.size() || !std::isfinite(value) || value < 0.0) {
        throw ParseError(fmt::format("bad duration '{}'", buf));
    }
    return milliseconds{static_cast<long long>(std::llround(value * scale * 1000.0))};
}

std::chrono::minutes parse_utc_offset(std::string_view text) {
    text = trim(text);
    if (text == "Z" || text == "z" || text == "0" || text == "UTC") return minutes{0};
    expect_char(text, 0, "+-");
    const int sign = text[0] == '-' ? -1 : 1;
    const int h = parse_digits(text, 1, 2);
    expect_char(text, 3, ":");
    const int m = parse_digits(text, 4, 2);
    if (text.size() != 6 || h > 23 || m > 59) {
        throw ParseError(fmt::format("bad UTC offset '{}'", text));
    }
    return minutes{sign * (h * 60 + m)};
}

std::string format_utc_offset(std::chrono::minutes offset) {
    const char sign = offset.count() < 0 ? '-' : '+';
    const auto abs = offset.count() < 0 ? -offset.count() : offset.count();
    return fmt::format("{}{:02}:{:02}", sign, abs / 60, abs % 60);
}

std::chrono::minutes parse_time_of_day(std::string_view text) {
    text = trim(text);
    const int h = parse_digits(text, 0, 2);
    expect_char(text, 2, ":");
    const int m = parse_digits(text, 3, 2);
    if (text.size() != 5 || h > 24 || m > 59 || (h == 24 && m != 0)) {
        throw ParseError(fmt::format("bad time of day '{}'", text));
    }
    return minutes{h * 60 + m};
}

std::string format_time_of_day(std::chrono::minutes tod) {
    return fmt::format("{:02}:{:02}", tod.count() / 60, tod.count() % 60);
}

std::chrono::sys_days SessionHours::local_date(Timestamp ts) const {
    return floor<days>(ts + utc_offset);
}

std::chrono::minutes SessionHours::local_time_of_day(Timestamp ts) const {
    const auto local = ts + utc_offset;
    return floor<minutes>(local - floor<days>(local));
}

bool SessionHours::contains(Timestamp ts) const {
    const auto local = ts + utc_offset;
    const auto since_midnight = local - floor<days>(local);
    return since_midnight >= open && since_midnight <= close;
}

Timestamp SessionHours::open_at(std::chrono::sys_days local_day) const {
    return time_point_cast<seconds>(local_day + open - utc_offset);
}

Timestamp SessionHours::close_at(std::chrono::sys_days local_day) const {
    return time_point_cast<seconds>(local_day + close - utc_offset);
}

std::string format_date(std::chrono::sys_days day) { return fmt::format("{:%Y-%m-%d}", day); }

}  // namespace nowcast
