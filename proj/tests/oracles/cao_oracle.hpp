#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

struct Cao {
    std::vector<double> e1;
    std::vector<double> e2;
};

/// Cao's E1/E2 written directly from the definitions: for each dimension d
/// the vectors y_i(d) = (x_i, x_{i+lag}, ..., x_{i+(d-1)lag}) for the
/// i that also have a (d+1)-dimensional vector, max-norm nearest neighbour
/// with non-zero distance, a(i,d) = |y_i(d+1) - y_n(d+1)| / |y_i(d) - y_n(d)|.
inline Cao cao(const std::vector<double>& x, std::size_t lag, std::size_t max_dim) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double zero_tol = 1e-10 * (*hi - *lo);
    std::vector<double> e(max_dim + 1, 0.0);
    std::vector<double> estar(max_dim + 1, 0.0);
    for (std::size_t d = 1; d <= max_dim; ++d) {
        const std::size_t count = x.size() - d * lag;
        const auto dist = [&](std::size_t i, std::size_t j, std::size_t dim) {
            double m = 0.0;
            for (std::size_t k = 0; k < dim; ++k) m = std::max(m, std::abs(x[i + k * lag] - x[j + k * lag]));
            return m;
        };
        double sum_a = 0.0;
        double sum_star = 0.0;
        std::size_t used = 0;
        for (std::size_t i = 0; i < count; ++i) {
            std::size_t best = count;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < count; ++j) {
                if (j == i) continue;
                const double dd = dist(i, j, d);
                if (dd <= zero_tol) continue;
                if (dd < best_d) {
                    best_d = dd;
                    best = j;
                }
            }
            if (best == count) continue;
            sum_a += dist(i, best, d + 1) / best_d;
            sum_star += std::abs(x[i + d * lag] - x[best + d * lag]);
            ++used;
        }
        e[d] = sum_a / static_cast<double>(used);
        estar[d] = sum_star / static_cast<double>(used);
    }
    Cao out;
    for (std::size_t d = 1; d < max_dim; ++d) {
        out.e1.push_back(e[d + 1] / e[d]);
        out.e2.push_back(estar[d + 1] / estar[d]);
    }
    return out;
}

}  // namespace oracle
