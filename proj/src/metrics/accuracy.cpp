#include "nowcast/metrics/accuracy.hpp"

#include <cmath>

#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast::metrics {

namespace {

void check_pair(std::span<const double> actual, std::span<const double> forecast, std::size_t min_n,
                const char* what) {
    if (actual.size() != forecast.size()) {
        throw LengthError(fmt::format("{}: {} actuals vs {} forecasts", what, actual.size(), forecast.size()));
    }
    if (actual.size() < min_n) {
        throw LengthError(fmt::format("{}: needs at least {} points, have {}", what, min_n, actual.size()));
    }
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (!std::isfinite(actual[i]) || !std::isfinite(forecast[i])) {
            throw DomainError(fmt::format("{}: non-finite value at index {}", what, i));
        }
    }
}

double smape_term(double y, double f) {
    const double denom = (std::abs(f) + std::abs(y)) / 2.0;
    return denom == 0.0 ? 0.0 : std::abs(f - y) / denom;
}

}  // namespace

double smape(std::span<const double> actual, std::span<const double> forecast) {
    check_pair(actual, forecast, 1, "smape");
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) sum += smape_term(actual[i], forecast[i]);
    return 100.0 * sum / static_cast<double>(actual.size());
}

double directional_symmetry(std::span<const double> actual, std::span<const double> forecast) {
    check_pair(actual, forecast, 2, "directional_symmetry");
    std::size_t hits = 0;
    for (std::size_t i = 1; i < actual.size(); ++i) {
        if ((actual[i] - actual[i - 1]) * (forecast[i] - forecast[i - 1]) > 0.0) ++hits;
    }
    return 100.0 * static_cast<double>(hits) / static_cast<double>(actual.size() - 1);
}

double theils_u(std::span<const double> actual, std::span<const double> forecast, TheilForm form) {
    check_pair(actual, forecast, 2, "theils_u");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = 0; t + 1 < actual.size(); ++t) {
        const double scale = actual[t];
        if (scale == 0.0) throw DomainError(fmt::format("theils_u: actual value at index {} is zero", t));
        const double err = forecast[t + 1] - actual[t + 1];
        const double e = form == TheilForm::u2 ? err / scale : err;
        const double change = (actual[t + 1] - actual[t]) / scale;
        num += e * e;
        den += change * change;
    }
    if (den == 0.0) throw DegeneracyError("theils_u: actual series is constant");
    return std::sqrt(num / den);
}

std::vector<double> point_losses(std::span<const double> actual, std::span<const double> forecast, Loss loss) {
    check_pair(actual, forecast, 1, "point_losses");
    std::vector<double> out(actual.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double e = forecast[i] - actual[i];
        if (loss == Loss::squared) {
            out[i] = e * e;
        } else {
            if (actual[i] == 0.0) throw DomainError(fmt::format("percentage loss: actual value at index {} is zero", i));
            out[i] = 100.0 * std::abs(e) / std::abs(actual[i]);
        }
    }
    return out;
}

std::vector<double> point_smape(std::span<const double> actual, std::span<const double> forecast) {
    check_pair(actual, forecast, 1, "point_smape");
    std::vector<double> out(actual.size());
    for (std::size_t i = 0; i < actual.size(); ++i) out[i] = 100.0 * smape_term(actual[i], forecast[i]);
    return out;
}

}  // namespace nowcast::metrics
