#pragma once

#include <cmath>
#include <vector>

namespace oracle {

/// (1/N) sum ln |f'(x_i)| along a trajectory of f(x) = 4x(1 - x).
inline double logistic_lyapunov(const std::vector<double>& orbit) {
    double s = 0.0;
    for (double x : orbit) s += std::log(std::abs(4.0 - 8.0 * x));
    return s / static_cast<double>(orbit.size());
}

}  // namespace oracle
