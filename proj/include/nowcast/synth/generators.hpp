#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nowcast/core/series.hpp"

namespace nowcast::synth {

/// x_{k+1} = 4 x_k (1 - x_k), starting from x0 in (0, 1).
std::vector<double> logistic_map(std::size_t n, double x0 = 0.2);

/// amplitude * sin(step * k) + offset.
std::vector<double> sine_wave(std::size_t n, double step = 0.1, double amplitude = 1.0, double offset = 0.0);

/// x_k = phi x_{k-1} + e_k, e ~ N(0, sigma^2), x_0 = e_0.
std::vector<double> ar1(std::size_t n, double phi, std::uint64_t seed, double sigma = 1.0);

/// i.i.d. N(0, 1).
std::vector<double> white_noise(std::size_t n, std::uint64_t seed);

/// Start value in [0.1, 0.9) drawn from the seed.
double logistic_start(std::uint64_t seed);

struct SessionSpec {
    std::string symbol = "SYNTH";
    std::chrono::sys_days first_day{std::chrono::year{2024} / 9 / 2};
    std::size_t warm_points = 300;   ///< bars before the first full session, ending at a session close
    std::size_t sessions = 5;        ///< full sessions after the warm-up
    std::size_t bars_per_session = 72;
    Seconds interval{300};
    SessionHours hours;
    double base = 100.0;
    double scale = 10.0;
    double noise = 0.0;              ///< std dev of additive Gaussian noise on the price
    std::uint64_t seed = 7;
};

/**
 * Weekday sessions of bars at open + interval, ..., open + bars * interval
 * local time, priced base + scale * x along one logistic-map orbit. The
 * warm-up bars occupy the tail of the preceding sessions.
 */
PriceSeries chaotic_sessions(const SessionSpec& spec);

/// Timestamps of `count` consecutive bars laid out like chaotic_sessions,
/// starting at bar `first_bar` of the first session.
std::vector<Timestamp> session_timestamps(const SessionSpec& spec, std::size_t first_bar, std::size_t count);

/// Pairs arbitrary positive values with session timestamps.
PriceSeries as_session_series(const std::vector<double>& values, const SessionSpec& spec);

}  // namespace nowcast::synth
