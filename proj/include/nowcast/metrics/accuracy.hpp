#pragma once

#include <span>
#include <vector>

namespace nowcast::metrics {

/// Symmetric mean absolute percentage error in [0, 200]. A pair with
/// |f| + |y| == 0 contributes 0. Throws LengthError when empty or when the
/// lengths differ, DomainError on non-finite values.
double smape(std::span<const double> actual, std::span<const double> forecast);

/// Percentage of steps whose actual and forecast changes have the same
/// strict sign, over n - 1 steps. Requires n >= 2.
double directional_symmetry(std::span<const double> actual, std::span<const double> forecast);

enum class TheilForm {
    u2,       ///< errors scaled by the previous actual; the naive forecast scores 1
    printed,  ///< unscaled squared errors over scaled actual changes
};

/**
 * sqrt( sum ((f[t+1] - y[t+1]) / y[t])^2 / sum ((y[t+1] - y[t]) / y[t])^2 ),
 * t = 0..n-2. Throws DegeneracyError for a constant actual series,
 * DomainError when some y[t] used as a scale is zero.
 */
double theils_u(std::span<const double> actual, std::span<const double> forecast, TheilForm form = TheilForm::u2);

enum class Loss { squared, absolute_percentage };

/// Per-point losses: (f - y)^2, or 100 |f - y| / |y|.
std::vector<double> point_losses(std::span<const double> actual, std::span<const double> forecast, Loss loss);

/// SMAPE of each point on its own.
std::vector<double> point_smape(std::span<const double> actual, std::span<const double> forecast);

}  // namespace nowcast::metrics
