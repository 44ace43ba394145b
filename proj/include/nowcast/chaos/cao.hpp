#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nowcast::chaos {

/// Cao's E1/E2 statistics; index 0 holds d = 1.
struct CaoProfile {
    std::vector<double> e1;
    std::vector<double> e2;

    std::size_t max_dim() const noexcept { return e1.size() + 1; }
};

/**
 * E1(d) = E(d+1)/E(d) and E2(d) = E*(d+1)/E*(d) for d = 1..max_dim-1, where
 * E(d) averages the max-norm distance ratio between each delay vector and its
 * nearest neighbour after adding one coordinate, and E*(d) averages the
 * absolute difference of that added coordinate.
 *
 * Neighbours at (numerically) zero distance are passed over in favour of the
 * next nearest; a point with no such neighbour is left out of the mean.
 * Requires max_dim >= 2 and series.size() >= max_dim*lag + 2 (LengthError).
 */
CaoProfile cao_profile(std::span<const double> series, std::size_t lag, std::size_t max_dim);

struct EmbeddingChoice {
    std::size_t dim = 2;
    bool saturated = true;
};

inline constexpr double kDefaultSaturationTol = 0.05;

/// Smallest d+1 where E1 has levelled off: |E1(d+1) - E1(d)| < tol and
/// E1(d) >= 1 - tol. Falls back to max_dim with saturated = false.
EmbeddingChoice select_embedding_dim(const CaoProfile& profile, double saturation_tol = kDefaultSaturationTol);

}  // namespace nowcast::chaos
