#include "nowcast/chaos/pacf.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast::chaos {

std::vector<double> acf(std::span<const double> series, std::size_t max_lag) {
    const std::size_t n = series.size();
    if (n == 0 || max_lag >= n) {
        throw LengthError(fmt::format("acf: need more than {} points, have {}", max_lag, n));
    }
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
    double c0 = 0.0;
    for (double x : series) c0 += (x - mean) * (x - mean);
    if (!(c0 > 0.0)) {
        throw DegeneracyError("acf: series has zero variance");
    }
    std::vector<double> r(max_lag + 1);
    r[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double ck = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) ck += (series[t] - mean) * (series[t + k] - mean);
        r[k] = ck / c0;
    }
    return r;
}

std::vector<double> pacf(std::span<const double> series, std::size_t max_lag) {
    if (max_lag == 0) {
        throw std::invalid_argument("pacf: max_lag must be >= 1");
    }
    if (2 * max_lag >= series.size()) {
        throw LengthError(fmt::format("pacf: max_lag {} must be below half the series length {}", max_lag,
                                      series.size()));
    }
    const auto r = acf(series, max_lag);

    std::vector<double> out(max_lag);
    std::vector<double> phi(max_lag + 1, 0.0);
    std::vector<double> prev(max_lag + 1, 0.0);
    phi[1] = r[1];
    out[0] = r[1];
    double v = 1.0 - r[1] * r[1];
    for (std::size_t k = 2; k <= max_lag; ++k) {
        double num = r[k];
        for (std::size_t j = 1; j < k; ++j) num -= phi[j] * r[k - j];
        const double phikk = v > 0.0 ? num / v : 0.0;
        prev = phi;
        phi[k] = phikk;
        for (std::size_t j = 1; j < k; ++j) phi[j] = prev[j] - phikk * prev[k - j];
        v *= 1.0 - phikk * phikk;
        out[k - 1] = phikk;
    }
    return out;
}

std::size_t select_lag(std::span<const double> pacf_values, std::size_t n) {
    if (pacf_values.empty()) {
        throw std::invalid_argument("select_lag: empty PACF");
    }
    const double band = 1.96 / std::sqrt(static_cast<double>(n));
    std::size_t lag = 0;
    while (lag < pacf_values.size() && std::abs(pacf_values[lag]) > band) ++lag;
    return lag == 0 ? 1 : lag;
}

}  // namespace nowcast::chaos
