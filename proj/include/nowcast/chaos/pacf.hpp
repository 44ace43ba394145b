#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nowcast::chaos {

/// Sample autocorrelations r_0..r_max_lag (r_0 == 1), normalised by the
/// lag-0 sum of squares. Throws DegeneracyError for a constant series.
std::vector<double> acf(std::span<const double> series, std::size_t max_lag);

/**
 * Partial autocorrelations for lags 1..max_lag from the Durbin-Levinson
 * recursion on the sample ACF. Element 0 is lag 1 and equals acf()[1].
 *
 * Requires 1 <= max_lag and 2*max_lag < series.size() (LengthError
 * otherwise); a constant series raises DegeneracyError.
 */
std::vector<double> pacf(std::span<const double> series, std::size_t max_lag);

/// Last lag before the PACF first drops inside the +-1.96/sqrt(n) band,
/// floored at 1.
std::size_t select_lag(std::span<const double> pacf_values, std::size_t n);

}  // namespace nowcast::chaos
