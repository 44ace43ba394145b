#include "nowcast/core/series.hpp"

#include <cmath>

#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast {

void validate_price(double close, std::string_view context) {
    if (!std::isfinite(close) || close <= 0.0) {
        throw DomainError(fmt::format("{}: close must be finite and > 0, got {}", context, close));
    }
}

PriceSeries::PriceSeries(std::string symbol, std::vector<PricePoint> points)
    : symbol_(std::move(symbol)), points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        validate_price(points_[i].close, fmt::format("point {}", i));
        if (i > 0 && points_[i].timestamp <= points_[i - 1].timestamp) {
            throw OrderingError(fmt::format("point {} at {} is not after {}", i,
                                            format_rfc3339(points_[i].timestamp),
                                            format_rfc3339(points_[i - 1].timestamp)));
        }
    }
}

std::vector<double> PriceSeries::closes() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.close);
    return out;
}

PriceSeries PriceSeries::slice(std::size_t begin, std::size_t end) const {
    if (begin > end || end > points_.size()) {
        throw LengthError(fmt::format("slice [{}, {}) outside series of {}", begin, end, points_.size()));
    }
    PriceSeries out;
    out.symbol_ = symbol_;
    out.points_.assign(points_.begin() + static_cast<std::ptrdiff_t>(begin),
                       points_.begin() + static_cast<std::ptrdiff_t>(end));
    return out;
}

void PriceSeries::append(const PricePoint& point) {
    validate_price(point.close, format_rfc3339(point.timestamp));
    if (!points_.empty() && point.timestamp <= points_.back().timestamp) {
        throw OrderingError(fmt::format("{} is not after {}", format_rfc3339(point.timestamp),
                                        format_rfc3339(points_.back().timestamp)));
    }
    points_.push_back(point);
}

}  // namespace nowcast
