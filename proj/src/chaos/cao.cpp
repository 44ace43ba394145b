#include "nowcast/chaos/cao.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast::chaos {
namespace {

struct DimensionStats {
    double mean_ratio = 0.0;      // E(d)
    double mean_next_diff = 0.0;  // E*(d)
};

// Means over i of a(i, d) and of |x_{i+d*lag} - x_{n(i,d)+d*lag}|.
DimensionStats dimension_stats(std::span<const double> x, std::size_t lag, std::size_t d, double zero_tol) {
    const std::size_t count = x.size() - d * lag;
    double sum_ratio = 0.0;
    double sum_diff = 0.0;
    std::size_t valid = 0;
    for (std::size_t i = 0; i < count; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t nn = count;
        for (std::size_t j = 0; j < count; ++j) {
            if (j == i) continue;
            double dist = 0.0;
            for (std::size_t k = 0; k < d && dist < best; ++k) {
                dist = std::max(dist, std::abs(x[i + k * lag] - x[j + k * lag]));
            }
            if (dist > zero_tol && dist < best) {
                best = dist;
                nn = j;
            }
        }
        if (nn == count) continue;
        const double next = std::abs(x[i + d * lag] - x[nn + d * lag]);
        sum_ratio += std::max(best, next) / best;
        sum_diff += next;
        ++valid;
    }
    if (valid == 0) {
        throw DegeneracyError(fmt::format("cao: every point in dimension {} lacks a distinct neighbour", d));
    }
    return {sum_ratio / static_cast<double>(valid), sum_diff / static_cast<double>(valid)};
}

}  // namespace

CaoProfile cao_profile(std::span<const double> series, std::size_t lag, std::size_t max_dim) {
    if (lag == 0) throw std::invalid_argument("cao: lag must be >= 1");
    if (max_dim < 2) throw std::invalid_argument("cao: max_dim must be >= 2");
    if (series.size() < max_dim * lag + 2) {
        throw LengthError(fmt::format("cao: need {} points for lag={}, max_dim={}; have {}", max_dim * lag + 2, lag,
                                      max_dim, series.size()));
    }
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) {
        throw DegeneracyError("cao: series is constant");
    }
    const double zero_tol = 1e-10 * range;

    std::vector<DimensionStats> stats;
    stats.reserve(max_dim);
    for (std::size_t d = 1; d <= max_dim; ++d) stats.push_back(dimension_stats(series, lag, d, zero_tol));

    CaoProfile out;
    for (std::size_t d = 0; d + 1 < max_dim; ++d) {
        out.e1.push_back(stats[d + 1].mean_ratio / stats[d].mean_ratio);
        if (!(stats[d].mean_next_diff > 0.0)) {
            throw DegeneracyError(fmt::format("cao: E*({}) is zero", d + 1));
        }
        out.e2.push_back(stats[d + 1].mean_next_diff / stats[d].mean_next_diff);
    }
    return out;
}

EmbeddingChoice select_embedding_dim(const CaoProfile& profile, double saturation_tol) {
    if (profile.e1.empty()) throw std::invalid_argument("select_embedding_dim: empty profile");
    if (!(saturation_tol > 0.0 && saturation_tol < 1.0)) {
        throw std::invalid_argument("select_embedding_dim: saturation_tol must lie in (0, 1)");
    }
    const auto& e1 = profile.e1;
    for (std::size_t i = 0; i + 1 < e1.size(); ++i) {
        if (std::abs(e1[i + 1] - e1[i]) < saturation_tol && e1[i] >= 1.0 - saturation_tol) {
            return {i + 2, true};  // index i is d = i+1, and m = d+1
        }
    }
    return {profile.max_dim(), false};
}

}  // namespace nowcast::chaos
