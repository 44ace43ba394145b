#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nowcast::chaos {

/// How a DesignMatrix was produced from a scalar series.
struct EmbeddingSpec {
    std::size_t lag = 1;
    std::size_t embedding_dim = 2;
    std::size_t stride = 1;

    bool operator==(const EmbeddingSpec&) const = default;
};

/// Supervised (multi-input, single-output) matrix: row-major features plus
/// one target per row.
class DesignMatrix {
public:
    explicit DesignMatrix(std::size_t feature_count);
    /// Throws ShapeError if features.size() != targets.size() * feature_count.
    DesignMatrix(std::size_t feature_count, std::vector<double> features, std::vector<double> targets);

    std::size_t rows() const noexcept { return targets_.size(); }
    std::size_t feature_count() const noexcept { return feature_count_; }
    bool empty() const noexcept { return targets_.empty(); }

    std::span<const double> features(std::size_t row) const {
        return {features_.data() + row * feature_count_, feature_count_};
    }
    double at(std::size_t row, std::size_t col) const { return features_[row * feature_count_ + col]; }
    double target(std::size_t row) const { return targets_[row]; }
    std::span<const double> targets() const noexcept { return targets_; }
    std::span<const double> feature_data() const noexcept { return features_; }

    void add_row(std::span<const double> features, double target);
    /// Rows [begin, end), keeping the embedding spec.
    DesignMatrix slice(std::size_t begin, std::size_t end) const;

    const std::optional<EmbeddingSpec>& embedding() const noexcept { return embedding_; }
    void set_embedding(EmbeddingSpec spec) { embedding_ = spec; }

    bool operator==(const DesignMatrix&) const = default;

private:
    std::size_t feature_count_;
    std::vector<double> features_;
    std::vector<double> targets_;
    std::optional<EmbeddingSpec> embedding_;
};

/**
 * Delay embedding into supervised form. Row r starts at i = r*stride and holds
 * features (x_i, x_{i+lag}, ..., x_{i+(m-2)lag}) with target x_{i+(m-1)lag}.
 * With stride 1 there are N - (m-1)*lag rows, in time order.
 *
 * Requires lag >= 1, m >= 2, stride >= 1, N >= (m-1)*lag + 1 (LengthError).
 */
DesignMatrix takens_embed(std::span<const double> series, std::size_t lag, std::size_t embedding_dim,
                          std::size_t stride = 1);

/// The forecast input for the next value: (y_{t-(m-2)lag}, ..., y_t) taken
/// from the tail of the series.
std::vector<double> forecast_features(std::span<const double> series, std::size_t lag, std::size_t embedding_dim);

}  // namespace nowcast::chaos
