#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <thread>

#include "nowcast/core/channel.hpp"
#include "nowcast/core/error.hpp"
#include "nowcast/core/family.hpp"
#include "nowcast/core/forecast_record.hpp"
#include "nowcast/core/series.hpp"
#include "nowcast/core/time.hpp"

using namespace nowcast;
using namespace std::chrono;

TEST(Time, ParsesZuluAndOffsets) {
    const Timestamp utc = sys_days{year{2024} / 9 / 2} + hours{13} + minutes{30};
    EXPECT_EQ(parse_rfc3339("2024-09-02T13:30:00Z"), utc);
    EXPECT_EQ(parse_rfc3339("2024-09-02T09:30:00-04:00"), utc);
    EXPECT_EQ(parse_rfc3339("2024-09-02T19:00:00+05:30"), utc);
    EXPECT_EQ(parse_rfc3339("2024-09-02T13:30:00.987Z"), utc);
    EXPECT_EQ(parse_rfc3339("2024-09-02 13:30:00Z"), utc);
}

TEST(Time, FormatRoundTrips) {
    const Timestamp ts = sys_days{year{2023} / 12 / 31} + hours{23} + minutes{59} + seconds{58};
    EXPECT_EQ(format_rfc3339(ts), "2023-12-31T23:59:58Z");
    EXPECT_EQ(parse_rfc3339(format_rfc3339(ts)), ts);
}

TEST(Time, RejectsMalformedTimestamps) {
    for (const char* bad : {"", "2024-09-02", "2024-13-02T13:30:00Z", "2024-09-02T13:30:00",
                            "2024-02-30T00:00:00Z", "2024-09-02T25:00:00Z", "2024-09-02T13:30:00+5"}) {
        EXPECT_THROW(parse_rfc3339(bad), ParseError) << bad;
    }
}

TEST(Time, Durations) {
    EXPECT_EQ(parse_duration("300"), milliseconds{300000});
    EXPECT_EQ(parse_duration("300s"), milliseconds{300000});
    EXPECT_EQ(parse_duration("5m"), milliseconds{300000});
    EXPECT_EQ(parse_duration("1h"), milliseconds{3600000});
    EXPECT_EQ(parse_duration("1.5s"), milliseconds{1500});
    EXPECT_THROW(parse_duration("abc"), ParseError);
    EXPECT_THROW(parse_duration("-5s"), ParseError);
}

TEST(Time, OffsetsAndTimeOfDay) {
    EXPECT_EQ(parse_utc_offset("+05:30"), minutes{330});
    EXPECT_EQ(parse_utc_offset("-04:00"), minutes{-240});
    EXPECT_EQ(parse_utc_offset("Z"), minutes{0});
    EXPECT_EQ(format_utc_offset(minutes{330}), "+05:30");
    EXPECT_EQ(format_utc_offset(minutes{-240}), "-04:00");
    EXPECT_EQ(parse_time_of_day("09:30"), minutes{570});
    EXPECT_EQ(format_time_of_day(minutes{930}), "15:30");
    EXPECT_THROW(parse_time_of_day("24:10"), ParseError);
}

TEST(Time, SessionHoursUseLocalCalendar) {
    SessionHours h{minutes{570}, minutes{930}, minutes{330}};
    const sys_days day = year{2024} / 9 / 2;
    EXPECT_EQ(h.open_at(day), Timestamp{day + hours{4}});
    EXPECT_EQ(h.close_at(day), Timestamp{day + hours{10}});
    EXPECT_TRUE(h.contains(h.open_at(day)));
    EXPECT_TRUE(h.contains(h.close_at(day)));
    EXPECT_FALSE(h.contains(h.close_at(day) + seconds{1}));
    // 20:00 UTC on the 1st is 01:30 local on the 2nd
    const Timestamp late = sys_days{year{2024} / 9 / 1} + hours{20};
    EXPECT_EQ(h.local_date(late), day);
    EXPECT_EQ(h.local_time_of_day(late), minutes{90});
    EXPECT_EQ(format_date(day), "2024-09-02");
}

TEST(Series, EnforcesOrderingAndDomain) {
    const Timestamp t0 = sys_days{year{2024} / 9 / 2} + hours{10};
    EXPECT_NO_THROW(PriceSeries("X", {{t0, 1.0}, {t0 + minutes{5}, 2.0}}));
    EXPECT_THROW(PriceSeries("X", {{t0, 1.0}, {t0, 2.0}}), OrderingError);
    EXPECT_THROW(PriceSeries("X", {{t0 + minutes{5}, 1.0}, {t0, 2.0}}), OrderingError);
    EXPECT_THROW(PriceSeries("X", {{t0, 0.0}}), DomainError);
    EXPECT_THROW(PriceSeries("X", {{t0, -3.0}}), DomainError);
    EXPECT_THROW(PriceSeries("X", {{t0, std::numeric_limits<double>::quiet_NaN()}}), DomainError);
    EXPECT_THROW(PriceSeries("X", {{t0, std::numeric_limits<double>::infinity()}}), DomainError);
}

TEST(Series, AppendAndSlice) {
    const Timestamp t0 = sys_days{year{2024} / 9 / 2} + hours{10};
    PriceSeries s("X", {{t0, 1.0}});
    s.append({t0 + minutes{5}, 2.0});
    s.append({t0 + minutes{10}, 3.0});
    EXPECT_THROW(s.append({t0 + minutes{10}, 4.0}), OrderingError);
    EXPECT_THROW(s.append({t0 + minutes{15}, -1.0}), DomainError);
    EXPECT_EQ(s.size(), 3u);
    EXPECT_EQ(s.closes(), (std::vector<double>{1.0, 2.0, 3.0}));
    const auto mid = s.slice(1, 3);
    EXPECT_EQ(mid.symbol(), "X");
    EXPECT_EQ(mid.closes(), (std::vector<double>{2.0, 3.0}));
}

TEST(Family, KeysLabelsAndAliases) {
    EXPECT_EQ(family_key(Family::random_forest), "random_forest");
    EXPECT_EQ(family_label(Family::random_forest), "RF");
    EXPECT_EQ(family_long_label(Family::random_forest), "Random Forest");
    EXPECT_EQ(parse_family("rf"), Family::random_forest);
    EXPECT_EQ(parse_family("random-forest"), Family::random_forest);
    EXPECT_THROW(parse_family("svm"), ConfigError);
    for (Family f : kAllFamilies) EXPECT_EQ(parse_family(family_key(f)), f);
}

TEST(Family, ListIsCanonicalAndDeduplicated) {
    EXPECT_EQ(parse_family_list("glm,ridge,lasso,ridge"),
              (std::vector<Family>{Family::lasso, Family::ridge, Family::glm}));
    EXPECT_THROW(parse_family_list(""), ConfigError);
}

TEST(ForecastRecord, CloseComputesSquaredError) {
    ForecastRecord r;
    r.forecast = 10.0;
    EXPECT_FALSE(r.closed());
    EXPECT_TRUE(std::isnan(r.squared_error));
    const Timestamp ts = sys_days{year{2024} / 9 / 2} + hours{10};
    r.close(ts, 12.5);
    EXPECT_TRUE(r.closed());
    EXPECT_EQ(r.timestamp, ts);
    EXPECT_DOUBLE_EQ(r.squared_error, 6.25);
}

TEST(Channel, PreservesOrderAcrossThreads) {
    BoundedChannel<int> ch(4);
    std::thread producer([&] {
        for (int i = 0; i < 1000; ++i) ASSERT_TRUE(ch.push(i));
        ch.close();
    });
    int expected = 0;
    while (auto v = ch.pop()) EXPECT_EQ(*v, expected++);
    producer.join();
    EXPECT_EQ(expected, 1000);
}

TEST(Channel, FailureSurfacesAfterDrain) {
    BoundedChannel<int> ch(8);
    ch.push(1);
    ch.push(2);
    ch.close(std::make_exception_ptr(IoError("feed down")));
    EXPECT_EQ(ch.pop(), 1);
    EXPECT_EQ(ch.pop(), 2);
    EXPECT_THROW(ch.pop(), IoError);
    EXPECT_FALSE(ch.push(3));
}
