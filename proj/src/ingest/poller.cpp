#include "nowcast/ingest/poller.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include "nowcast/core/error.hpp"

namespace nowcast::ingest {

using json = nlohmann::json;

namespace {

std::string excerpt(std::string_view body) {
    constexpr std::size_t kMax = 120;
    std::string out(body.substr(0, kMax));
    for (char& c : out)
        if (c == '\n' || c == '\r') c = ' ';
    if (body.size() > kMax) out += "...";
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::optional<double> as_number(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        double d = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
        if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return d;
    }
    return std::nullopt;
}

}  // namespace

FieldMapping parse_field_mapping(std::string_view text) {
    FieldMapping m;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = std::min(text.find(',', pos), text.size());
        const auto item = trim(text.substr(pos, comma - pos));
        pos = comma + 1;
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw ConfigError(fmt::format("field mapping item '{}' lacks '='", item));
        const auto key = trim(item.substr(0, eq));
        const std::string ptr(trim(item.substr(eq + 1)));
        try {
            (void)json::json_pointer(ptr);
        } catch (const json::exception&) {
            throw ConfigError(fmt::format("'{}' is not a JSON pointer", ptr));
        }
        if (key == "price") {
            m.price = ptr;
        } else if (key == "timestamp") {
            m.timestamp = ptr;
        } else if (key == "symbol") {
            m.symbol = ptr;
        } else {
            throw ConfigError(fmt::format("unknown field mapping key '{}'", key));
        }
    }
    if (m.price.empty() || m.timestamp.empty()) {
        throw ConfigError("field mapping needs both price= and timestamp=");
    }
    return m;
}

Tick parse_quote(std::string_view body, const FieldMapping& mapping, const std::string& default_symbol) {
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::exception&) {
        throw ProtocolError(fmt::format("response is not JSON: '{}'", excerpt(body)));
    }
    const auto field = [&](const std::string& ptr, const char* name) -> const json& {
        const json::json_pointer p(ptr);
        if (!doc.contains(p)) {
            throw ProtocolError(fmt::format("response has no {} at {}: '{}'", name, ptr, excerpt(body)));
        }
        return doc.at(p);
    };

    Tick tick;
    const auto price = as_number(field(mapping.price, "price"));
    if (!price || !std::isfinite(*price) || *price <= 0.0) {
        throw ProtocolError(fmt::format("price at {} is not a positive number: '{}'", mapping.price, excerpt(body)));
    }
    tick.close = *price;

    const auto& ts = field(mapping.timestamp, "timestamp");
    if (const auto secs = as_number(ts)) {
        if (!std::isfinite(*secs) || *secs < 0.0) {
            throw ProtocolError(fmt::format("timestamp is out of range: '{}'", excerpt(body)));
        }
        tick.timestamp = Timestamp(Seconds(static_cast<long long>(*secs)));
    } else if (ts.is_string()) {
        try {
            tick.timestamp = parse_rfc3339(ts.get<std::string>());
        } catch (const ParseError&) {
            throw ProtocolError(fmt::format("timestamp is neither epoch seconds nor RFC 3339: '{}'", excerpt(body)));
        }
    } else {
        throw ProtocolError(fmt::format("timestamp has an unsupported type: '{}'", excerpt(body)));
    }

    tick.symbol = default_symbol;
    if (!mapping.symbol.empty()) {
        const auto& s = field(mapping.symbol, "symbol");
        if (!s.is_string()) throw ProtocolError(fmt::format("symbol is not a string: '{}'", excerpt(body)));
        tick.symbol = s.get<std::string>();
    }
    return tick;
}

Fetcher http_fetcher(std::chrono::seconds timeout) {
    return [timeout](const std::string& url) {
        HttpResponse out;
        const auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos) {
            out.error = "url lacks a scheme";
            return out;
        }
        const auto path_start = url.find('/', scheme_end + 3);
        const std::string origin = url.substr(0, path_start);
        const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
        try {
            httplib::Client client(origin);
            client.set_connection_timeout(timeout);
            client.set_read_timeout(timeout);
            client.set_follow_location(true);
            auto res = client.Get(path);
            if (!res) {
                out.error = httplib::to_string(res.error());
                return out;
            }
            out.status = res->status;
            out.body = res->body;
        } catch (const std::exception& e) {
            out.error = e.what();
        }
        return out;
    };
}

std::chrono::milliseconds Backoff::delay(int attempt) const {
    auto d = base;
    for (int i = 0; i < attempt && d < cap; ++i) d *= 2;
    return std::min(d, cap);
}

HttpQuotePoller::HttpQuotePoller(PollerOptions options) : options_(std::move(options)) {
    if (options_.interval.count() <= 0) throw std::invalid_argument("poll interval must be > 0");
    if (options_.backoff.max_attempts < 1) throw std::invalid_argument("poller needs at least one attempt");
    if (!options_.clock) options_.clock = [] { return std::chrono::system_clock::now(); };
    if (!options_.sleeper) options_.sleeper = real_sleeper();
    if (!options_.fetch) options_.fetch = http_fetcher();
}

std::chrono::system_clock::time_point HttpQuotePoller::now() const { return options_.clock(); }

void HttpQuotePoller::wait_until(std::chrono::system_clock::time_point t) {
    const auto current = now();
    if (t > current) options_.sleeper(std::chrono::ceil<std::chrono::milliseconds>(t - current));
}

std::vector<GapEvent> HttpQuotePoller::gaps() const { return gaps_; }

std::optional<Tick> HttpQuotePoller::next() {
    using std::chrono::system_clock;
    while (!cancelled_) {
        if (!slot_) slot_ = options_.start_at ? system_clock::time_point(*options_.start_at) : now();
        if (options_.stop_at && *slot_ > system_clock::time_point(*options_.stop_at)) return std::nullopt;
        wait_until(*slot_);
        if (cancelled_) break;

        const auto slot = *slot_;
        std::optional<Tick> tick;
        std::string last_error;
        for (int attempt = 0; attempt < options_.backoff.max_attempts && !cancelled_; ++attempt) {
            ++polls_;
            const auto res = options_.fetch(options_.url);
            if (res.status >= 200 && res.status < 300) {
                tick = parse_quote(res.body, options_.mapping, options_.symbol);
                break;
            }
            last_error = res.status == 0 ? res.error : fmt::format("HTTP {}", res.status);
            if (attempt + 1 < options_.backoff.max_attempts) options_.sleeper(options_.backoff.delay(attempt));
        }

        // Next slot on the interval grid that is still ahead of the clock.
        auto next_slot = slot + options_.interval;
        const auto current = now();
        while (next_slot < current) next_slot += options_.interval;
        slot_ = next_slot;

        const auto slot_ts = std::chrono::floor<Seconds>(slot);
        if (!tick) {
            if (cancelled_) break;
            gaps_.push_back({slot_ts, std::chrono::floor<Seconds>(next_slot), 1,
                             fmt::format("{} failed attempts: {}", options_.backoff.max_attempts, last_error)});
            continue;
        }
        if (last_emitted_ && tick->timestamp <= *last_emitted_) continue;
        last_emitted_ = tick->timestamp;
        return tick;
    }
    return std::nullopt;
}

}  // namespace nowcast::ingest
