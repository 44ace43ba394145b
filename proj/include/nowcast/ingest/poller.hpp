#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nowcast/core/series.hpp"
#include "nowcast/ingest/replay.hpp"

namespace nowcast::ingest {

/// JSON pointers into the quote response.
struct FieldMapping {
    std::string price;
    std::string timestamp;
    std::string symbol;  ///< optional; the configured symbol is used when empty
    bool operator==(const FieldMapping&) const = default;
};

/// "price=/quote/close,timestamp=/quote/time[,symbol=/quote/sym]". Throws ConfigError.
FieldMapping parse_field_mapping(std::string_view text);

/**
 * Extracts a tick from a JSON body. The price may be a number or numeric
 * string; the timestamp epoch seconds (number or digit string) or RFC 3339.
 * Throws ProtocolError quoting the start of the payload.
 */
Tick parse_quote(std::string_view body, const FieldMapping& mapping, const std::string& default_symbol);

struct HttpResponse {
    int status = 0;  ///< 0 when no response arrived
    std::string body;
    std::string error;
};

using Fetcher = std::function<HttpResponse(const std::string& url)>;

/// GET via cpp-httplib (http and https).
Fetcher http_fetcher(std::chrono::seconds timeout = std::chrono::seconds{10});

struct Backoff {
    std::chrono::milliseconds base{1000};
    std::chrono::milliseconds cap{60'000};
    int max_attempts = 5;

    /// Wait after failed attempt `attempt` (0-based): min(cap, base * 2^attempt).
    std::chrono::milliseconds delay(int attempt) const;
};

struct PollerOptions {
    std::string url;
    std::string symbol;
    FieldMapping mapping;
    std::chrono::milliseconds interval{300'000};
    Backoff backoff;
    std::optional<Timestamp> start_at;  ///< first poll slot; now when empty
    std::optional<Timestamp> stop_at;   ///< end of stream once the clock passes it
    std::function<std::chrono::system_clock::time_point()> clock;  ///< defaults to system_clock::now
    Sleeper sleeper;                                                  ///< defaults to real_sleeper()
    Fetcher fetch;                                                    ///< defaults to http_fetcher()
};

/**
 * Polls the endpoint once per interval slot. Failed attempts are retried
 * with exponential backoff; when every attempt of a slot fails a gap event
 * is recorded and polling continues at the next slot. Quotes whose
 * timestamp is not newer than the last emitted one are dropped.
 */
class HttpQuotePoller : public TickSource {
public:
    explicit HttpQuotePoller(PollerOptions options);

    std::optional<Tick> next() override;
    std::vector<GapEvent> gaps() const override;

    void cancel() override { cancelled_ = true; }
    std::size_t polls() const noexcept { return polls_; }

private:
    std::chrono::system_clock::time_point now() const;
    void wait_until(std::chrono::system_clock::time_point t);

    PollerOptions options_;
    std::optional<std::chrono::system_clock::time_point> slot_;
    std::optional<Timestamp> last_emitted_;
    std::vector<GapEvent> gaps_;
    std::size_t polls_ = 0;
    std::atomic<bool> cancelled_{false};
};

}  // namespace nowcast::ingest
