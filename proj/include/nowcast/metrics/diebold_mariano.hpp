#pragma once

#include <cstddef>
#include <span>

namespace nowcast::metrics {

struct DmOptions {
    std::size_t horizon = 1;
    bool small_sample_correction = false;  ///< Harvey-Leybourne-Newbold, p-value from Student t(n-1)
};

struct DmResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

inline constexpr std::size_t kMinDmSamples = 10;

/**
 * Diebold-Mariano test on d = loss1 - loss2. The long-run variance of d uses
 * a rectangular kernel over horizon - 1 autocovariance lags (divisor n), and
 * the two-sided p-value comes from the standard normal. A positive
 * statistic means the first series has larger losses.
 *
 * Throws LengthError for unequal lengths or n < 10, DegeneracyError when the
 * differential has no variance.
 */
DmResult dm_test(std::span<const double> loss1, std::span<const double> loss2, const DmOptions& options = {});

}  // namespace nowcast::metrics
