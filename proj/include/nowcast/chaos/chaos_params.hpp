#pragma once

#include <cstddef>

namespace nowcast::chaos {

/// Phase-space reconstruction parameters for one calibration window.
struct ChaosParams {
    std::size_t lag = 1;            ///< delay tau, in ticks
    std::size_t embedding_dim = 2;  ///< m; the design matrix has m-1 features
    double lyapunov = 0.0;
    bool chaotic = true;            ///< lyapunov >= 0
    bool dim_saturated = true;      ///< false when Cao's E1 never levelled off

    bool operator==(const ChaosParams&) const = default;
};

}  // namespace nowcast::chaos
