#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nowcast::chaos {

inline constexpr std::size_t kDefaultLyapunovSteps = 10;

/// Mean log-divergence of nearest-neighbour pairs, step by step.
struct DivergenceCurve {
    std::vector<double> mean_log_divergence;  ///< <ln d_j(i)> for i = 0..max_steps-1
    std::vector<std::size_t> pair_counts;     ///< pairs contributing at each step
    double mean_period = 0.0;                 ///< temporal exclusion window, in samples
    std::size_t fit_steps = 0;                ///< leading steps used for the slope
};

/// Inverse of the power-weighted mean frequency of the periodogram, in samples.
double mean_period(std::span<const double> series);

/// Rosenstein divergence curve on the delay reconstruction (lag, dim).
/// Neighbours closer in time than one mean period are excluded.
DivergenceCurve divergence_curve(std::span<const double> series, std::size_t lag, std::size_t embedding_dim,
                                 std::size_t max_steps = kDefaultLyapunovSteps);

/**
 * Largest Lyapunov exponent, per sample, by Rosenstein's method: the
 * least-squares slope of the divergence curve over its first max_steps/2
 * steps.
 *
 * Requires series.size() >= (dim-1)*lag + max_steps + 2 (LengthError) and
 * max_steps >= 4. A constant series raises DegeneracyError.
 */
double estimate_lyapunov(std::span<const double> series, std::size_t lag, std::size_t embedding_dim,
                         std::size_t max_steps = kDefaultLyapunovSteps);

}  // namespace nowcast::chaos
