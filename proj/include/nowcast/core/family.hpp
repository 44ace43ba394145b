#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace nowcast {

/// The five regression families, in the column order used by all reports.
enum class Family { lasso, ridge, random_forest, gbt, glm };

inline constexpr std::array<Family, 5> kAllFamilies{Family::lasso, Family::ridge, Family::random_forest,
                                                    Family::gbt, Family::glm};

/// Stable key used in logs and config ("random_forest").
std::string_view family_key(Family f);
/// Short column label ("RF").
std::string_view family_label(Family f);
/// Long label used in pairwise comparisons ("Random Forest").
std::string_view family_long_label(Family f);
/// Accepts keys plus the aliases "rf" and "random-forest". Throws ConfigError.
Family parse_family(std::string_view text);
/// Comma-separated list, deduplicated, returned in canonical order.
std::vector<Family> parse_family_list(std::string_view text);

}  // namespace nowcast
