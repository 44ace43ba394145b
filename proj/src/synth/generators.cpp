#include "nowcast/synth/generators.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace nowcast::synth {

std::vector<double> logistic_map(std::size_t n, double x0) {
    if (!(x0 > 0.0 && x0 < 1.0)) throw std::invalid_argument("logistic start must lie in (0, 1)");
    std::vector<double> x(n);
    double v = x0;
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = v;
        v = 4.0 * v * (1.0 - v);
    }
    return x;
}

std::vector<double> sine_wave(std::size_t n, double step, double amplitude, double offset) {
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = amplitude * std::sin(step * static_cast<double>(k)) + offset;
    return x;
}

std::vector<double> ar1(std::size_t n, double phi, std::uint64_t seed, double sigma) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> e(0.0, sigma);
    std::vector<double> x(n);
    double prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        prev = (k == 0 ? 0.0 : phi * prev) + e(rng);
        x[k] = prev;
    }
    return x;
}

std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> e(0.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = e(rng);
    return x;
}

double logistic_start(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return 0.1 + 0.8 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

namespace {

bool weekday(std::chrono::sys_days d) {
    const std::chrono::weekday w{d};
    return w != std::chrono::Saturday && w != std::chrono::Sunday;
}

std::chrono::sys_days next_weekday(std::chrono::sys_days d) {
    do {
        d += std::chrono::days{1};
    } while (!weekday(d));
    return d;
}

std::chrono::sys_days prev_weekday(std::chrono::sys_days d) {
    do {
        d -= std::chrono::days{1};
    } while (!weekday(d));
    return d;
}

}  // namespace

std::vector<Timestamp> session_timestamps(const SessionSpec& spec, std::size_t first_bar, std::size_t count) {
    if (spec.bars_per_session == 0) throw std::invalid_argument("sessions need at least one bar");
    std::vector<Timestamp> out;
    out.reserve(count);
    auto day = spec.first_day;
    while (!weekday(day)) day = next_weekday(day);
    std::size_t bar = first_bar;
    while (out.size() < count) {
        if (bar >= spec.bars_per_session) {
            day = next_weekday(day);
            bar = 0;
        }
        out.push_back(spec.hours.open_at(day) + spec.interval * static_cast<long>(bar + 1));
        ++bar;
    }
    return out;
}

PriceSeries as_session_series(const std::vector<double>& values, const SessionSpec& spec) {
    // Warm bars fill the tail of earlier sessions; count back whole sessions.
    const std::size_t warm_sessions = (spec.warm_points + spec.bars_per_session - 1) / spec.bars_per_session;
    auto day = spec.first_day;
    while (!weekday(day)) day = next_weekday(day);
    for (std::size_t i = 0; i < warm_sessions; ++i) day = prev_weekday(day);
    const std::size_t first_bar = warm_sessions * spec.bars_per_session - spec.warm_points;

    SessionSpec shifted = spec;
    shifted.first_day = day;
    const auto ts = session_timestamps(shifted, first_bar, values.size());
    std::vector<PricePoint> points(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) points[i] = {ts[i], values[i]};
    return PriceSeries(spec.symbol, std::move(points));
}

PriceSeries chaotic_sessions(const SessionSpec& spec) {
    const std::size_t n = spec.warm_points + spec.sessions * spec.bars_per_session;
    const auto x = logistic_map(n, logistic_start(spec.seed));
    std::mt19937_64 rng(spec.seed ^ 0xA5A5A5A5ULL);
    std::normal_distribution<double> noise(0.0, spec.noise > 0.0 ? spec.noise : 1.0);
    std::vector<double> prices(n);
    for (std::size_t i = 0; i < n; ++i) {
        prices[i] = spec.base + spec.scale * x[i] + (spec.noise > 0.0 ? noise(rng) : 0.0);
    }
    return as_session_series(prices, spec);
}

}  // namespace nowcast::synth
