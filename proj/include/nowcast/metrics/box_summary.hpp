#pragma once

#include <span>
#include <vector>

namespace nowcast::metrics {

struct BoxSummary {
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double iqr = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    std::vector<double> outliers;  ///< ascending
    std::size_t count = 0;
};

/// Quantile with linear interpolation between order statistics at
/// h = (n - 1) p (the "type 7" rule). Input need not be sorted.
double quantile(std::span<const double> values, double p);

/// Quartiles by quantile(), outliers beyond 1.5 IQR from the quartiles,
/// whiskers at the most extreme values inside the fences.
/// Throws LengthError when empty.
BoxSummary box_summary(std::span<const double> values);

}  // namespace nowcast::metrics
