#include "nowcast/metrics/box_summary.hpp"

#include <algorithm>
#include <cmath>

#include "nowcast/core/error.hpp"

namespace nowcast::metrics {

namespace {

double sorted_quantile(const std::vector<double>& s, double p) {
    const double h = static_cast<double>(s.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

}  // namespace

double quantile(std::span<const double> values, double p) {
    if (values.empty()) throw LengthError("quantile of an empty sample");
    std::vector<double> s(values.begin(), values.end());
    std::sort(s.begin(), s.end());
    return sorted_quantile(s, std::clamp(p, 0.0, 1.0));
}

BoxSummary box_summary(std::span<const double> values) {
    if (values.empty()) throw LengthError("box summary of an empty sample");
    std::vector<double> s(values.begin(), values.end());
    std::sort(s.begin(), s.end());

    BoxSummary b;
    b.count = s.size();
    b.q1 = sorted_quantile(s, 0.25);
    b.median = sorted_quantile(s, 0.5);
    b.q3 = sorted_quantile(s, 0.75);
    b.iqr = b.q3 - b.q1;
    const double lo_fence = b.q1 - 1.5 * b.iqr;
    const double hi_fence = b.q3 + 1.5 * b.iqr;
    b.whisker_low = b.q1;
    b.whisker_high = b.q3;
    bool any_inside = false;
    for (double v : s) {
        if (v < lo_fence || v > hi_fence) {
            b.outliers.push_back(v);
        } else if (!any_inside) {
            b.whisker_low = b.whisker_high = v;
            any_inside = true;
        } else {
            b.whisker_high = v;
        }
    }
    return b;
}

}  // namespace nowcast::metrics
