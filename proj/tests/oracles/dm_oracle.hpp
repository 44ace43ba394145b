#pragma once

#include <cmath>
#include <vector>

namespace oracle {

struct Dm {
    double statistic;
    double p_value;
};

/// DM = dbar / sqrt((gamma_0 + 2 sum_{k<h} gamma_k) / n), p = 2 (1 - Phi(|DM|)).
inline Dm diebold_mariano(const std::vector<double>& l1, const std::vector<double>& l2, std::size_t h) {
    const std::size_t n = l1.size();
    std::vector<double> d(n);
    long double sum = 0.0L;
    for (std::size_t t = 0; t < n; ++t) {
        d[t] = l1[t] - l2[t];
        sum += d[t];
    }
    const double dbar = static_cast<double>(sum / n);
    double var = 0.0;
    for (std::size_t k = 0; k < h; ++k) {
        double g = 0.0;
        for (std::size_t t = k; t < n; ++t) g += (d[t] - dbar) * (d[t - k] - dbar);
        g /= static_cast<double>(n);
        var += k == 0 ? g : 2.0 * g;
    }
    const double stat = dbar / std::sqrt(var / static_cast<double>(n));
    const double phi = 0.5 * (1.0 + std::erf(std::abs(stat) / std::sqrt(2.0)));
    return {stat, 2.0 * (1.0 - phi)};
}

}  // namespace oracle
