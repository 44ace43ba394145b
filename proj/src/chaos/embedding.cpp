#include "nowcast/chaos/embedding.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast::chaos {
namespace {

void check_embedding_args(std::size_t lag, std::size_t embedding_dim) {
    if (lag == 0) throw std::invalid_argument("embedding: lag must be >= 1");
    if (embedding_dim < 2) throw std::invalid_argument("embedding: embedding_dim must be >= 2");
}

}  // namespace

DesignMatrix::DesignMatrix(std::size_t feature_count) : feature_count_(feature_count) {
    if (feature_count == 0) throw std::invalid_argument("DesignMatrix: feature_count must be >= 1");
}

DesignMatrix::DesignMatrix(std::size_t feature_count, std::vector<double> features, std::vector<double> targets)
    : feature_count_(feature_count), features_(std::move(features)), targets_(std::move(targets)) {
    if (feature_count == 0) throw std::invalid_argument("DesignMatrix: feature_count must be >= 1");
    if (features_.size() != targets_.size() * feature_count_) {
        throw ShapeError(fmt::format("DesignMatrix: {} feature values for {} rows of {}", features_.size(),
                                     targets_.size(), feature_count_));
    }
}

void DesignMatrix::add_row(std::span<const double> features, double target) {
    if (features.size() != feature_count_) {
        throw ShapeError(fmt::format("DesignMatrix: row of {} features, expected {}", features.size(),
                                     feature_count_));
    }
    features_.insert(features_.end(), features.begin(), features.end());
    targets_.push_back(target);
}

DesignMatrix DesignMatrix::slice(std::size_t begin, std::size_t end) const {
    if (begin > end || end > rows()) {
        throw LengthError(fmt::format("DesignMatrix: slice [{}, {}) of {} rows", begin, end, rows()));
    }
    DesignMatrix out(feature_count_,
                     std::vector<double>(features_.begin() + static_cast<std::ptrdiff_t>(begin * feature_count_),
                                         features_.begin() + static_cast<std::ptrdiff_t>(end * feature_count_)),
                     std::vector<double>(targets_.begin() + static_cast<std::ptrdiff_t>(begin),
                                         targets_.begin() + static_cast<std::ptrdiff_t>(end)));
    out.embedding_ = embedding_;
    return out;
}

DesignMatrix takens_embed(std::span<const double> series, std::size_t lag, std::size_t embedding_dim,
                          std::size_t stride) {
    check_embedding_args(lag, embedding_dim);
    if (stride == 0) throw std::invalid_argument("takens_embed: stride must be >= 1");
    const std::size_t span_len = (embedding_dim - 1) * lag;
    if (series.size() < span_len + 1) {
        throw LengthError(fmt::format("takens_embed: need {} points for lag={}, m={}; have {}", span_len + 1, lag,
                                      embedding_dim, series.size()));
    }
    const std::size_t features = embedding_dim - 1;
    const std::size_t rows = (series.size() - span_len - 1) / stride + 1;

    std::vector<double> x;
    std::vector<double> y;
    x.reserve(rows * features);
    y.reserve(rows);
    for (std::size_t i = 0; i + span_len < series.size(); i += stride) {
        for (std::size_t k = 0; k < features; ++k) x.push_back(series[i + k * lag]);
        y.push_back(series[i + span_len]);
    }
    DesignMatrix out(features, std::move(x), std::move(y));
    out.set_embedding({lag, embedding_dim, stride});
    return out;
}

std::vector<double> forecast_features(std::span<const double> series, std::size_t lag, std::size_t embedding_dim) {
    check_embedding_args(lag, embedding_dim);
    const std::size_t needed = (embedding_dim - 2) * lag + 1;
    if (series.size() < needed) {
        throw LengthError(fmt::format("forecast_features: need {} points for lag={}, m={}; have {}", needed, lag,
                                      embedding_dim, series.size()));
    }
    std::vector<double> out(embedding_dim - 1);
    const std::size_t last = series.size() - 1;
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = series[last - (embedding_dim - 2 - k) * lag];
    }
    return out;
}

}  // namespace nowcast::chaos
