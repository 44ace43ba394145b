#include "nowcast/metrics/diebold_mariano.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast::metrics {

DmResult dm_test(std::span<const double> loss1, std::span<const double> loss2, const DmOptions& options) {
    if (loss1.size() != loss2.size()) {
        throw LengthError(fmt::format("dm_test: {} vs {} losses", loss1.size(), loss2.size()));
    }
    const std::size_t n = loss1.size();
    if (n < kMinDmSamples) throw LengthError(fmt::format("dm_test: needs at least {} points, have {}", kMinDmSamples, n));
    if (options.horizon < 1 || options.horizon >= n) throw std::invalid_argument("dm_test: horizon must be in [1, n)");

    std::vector<double> d(n);
    double mean = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        d[t] = loss1[t] - loss2[t];
        if (!std::isfinite(d[t])) throw DomainError("dm_test: non-finite loss");
        mean += d[t];
    }
    mean /= static_cast<double>(n);

    const auto autocov = [&](std::size_t k) {
        double s = 0.0;
        for (std::size_t t = k; t < n; ++t) s += (d[t] - mean) * (d[t - k] - mean);
        return s / static_cast<double>(n);
    };
    double lrv = autocov(0);
    for (std::size_t k = 1; k < options.horizon; ++k) lrv += 2.0 * autocov(k);
    if (!(lrv > 0.0)) throw DegeneracyError("dm_test: loss differential has zero variance");

    const double nn = static_cast<double>(n);
    DmResult out;
    out.n = n;
    out.statistic = mean / std::sqrt(lrv / nn);
    if (options.small_sample_correction) {
        const double h = static_cast<double>(options.horizon);
        out.statistic *= std::sqrt((nn + 1.0 - 2.0 * h + h * (h - 1.0) / nn) / nn);
        const boost::math::students_t dist(nn - 1.0);
        out.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(out.statistic)));
    } else {
        out.p_value = std::erfc(std::abs(out.statistic) / std::sqrt(2.0));
    }
    return out;
}

}  // namespace nowcast::metrics
