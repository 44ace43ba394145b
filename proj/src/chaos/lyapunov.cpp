#include "nowcast/chaos/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast::chaos {
namespace {

double squared_distance(std::span<const double> x, std::size_t a, std::size_t b, std::size_t lag,
                        std::size_t dim) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double d = x[a + k * lag] - x[b + k * lag];
        s += d * d;
    }
    return s;
}

void require_spread(std::span<const double> series) {
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    if (!(*hi > *lo)) {
        throw DegeneracyError("lyapunov: series is constant, divergence is undefined");
    }
}

}  // namespace

double mean_period(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 4) throw LengthError("mean_period: need at least 4 points");
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);

    double weighted = 0.0;
    double total = 0.0;
    const double w0 = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 1; k <= n / 2; ++k) {
        // Direct DFT bin via a rotating phasor.
        const double c = std::cos(w0 * static_cast<double>(k));
        const double s = std::sin(w0 * static_cast<double>(k));
        double re = 0.0, im = 0.0, pc = 1.0, ps = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double v = series[t] - mean;
            re += v * pc;
            im -= v * ps;
            const double nc = pc * c - ps * s;
            ps = pc * s + ps * c;
            pc = nc;
        }
        const double power = re * re + im * im;
        weighted += power * static_cast<double>(k) / static_cast<double>(n);
        total += power;
    }
    if (!(total > 0.0)) {
        throw DegeneracyError("mean_period: flat spectrum");
    }
    return total / weighted;
}

DivergenceCurve divergence_curve(std::span<const double> series, std::size_t lag, std::size_t embedding_dim,
                                 std::size_t max_steps) {
    if (lag == 0 || embedding_dim == 0) {
        throw std::invalid_argument("lyapunov: lag and embedding_dim must be >= 1");
    }
    if (max_steps < 4) {
        throw std::invalid_argument("lyapunov: max_steps must be >= 4");
    }
    const std::size_t n = series.size();
    const std::size_t span_len = (embedding_dim - 1) * lag;
    if (n < span_len + max_steps + 2) {
        throw LengthError(fmt::format("lyapunov: need {} points for lag={}, dim={}, steps={}; have {}",
                                      span_len + max_steps + 2, lag, embedding_dim, max_steps, n));
    }
    require_spread(series);

    const std::size_t vectors = n - span_len;
    const std::size_t usable = vectors - max_steps;  // trajectories that can be followed max_steps

    DivergenceCurve curve;
    curve.mean_period = mean_period(series);
    // Never exclude so much that no candidate neighbour is left.
    const auto exclusion = static_cast<std::size_t>(
        std::min(std::ceil(curve.mean_period), static_cast<double>(usable / 4)));

    curve.mean_log_divergence.assign(max_steps, 0.0);
    curve.pair_counts.assign(max_steps, 0);

    for (std::size_t j = 0; j < usable; ++j) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_k = usable;
        for (std::size_t k = 0; k < usable; ++k) {
            const std::size_t gap = j > k ? j - k : k - j;
            if (gap <= exclusion) continue;
            const double d = squared_distance(series, j, k, lag, embedding_dim);
            if (d > 0.0 && d < best) {
                best = d;
                best_k = k;
            }
        }
        if (best_k == usable) continue;
        for (std::size_t i = 0; i < max_steps; ++i) {
            const double d = squared_distance(series, j + i, best_k + i, lag, embedding_dim);
            if (d > 0.0) {
                curve.mean_log_divergence[i] += 0.5 * std::log(d);
                ++curve.pair_counts[i];
            }
        }
    }

    for (std::size_t i = 0; i < max_steps; ++i) {
        if (curve.pair_counts[i] == 0) {
            throw DegeneracyError(fmt::format("lyapunov: no diverging neighbour pairs at step {}", i));
        }
        curve.mean_log_divergence[i] /= static_cast<double>(curve.pair_counts[i]);
    }
    curve.fit_steps = max_steps / 2;
    return curve;
}

double estimate_lyapunov(std::span<const double> series, std::size_t lag, std::size_t embedding_dim,
                         std::size_t max_steps) {
    const auto curve = divergence_curve(series, lag, embedding_dim, max_steps);
    const std::size_t m = curve.fit_steps;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = static_cast<double>(i);
        const double y = curve.mean_log_divergence[i];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double dm = static_cast<double>(m);
    return (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
}

}  // namespace nowcast::chaos
