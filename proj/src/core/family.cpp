#include "nowcast/core/family.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast {

std::string_view family_key(Family f) {
    switch (f) {
    case Family::lasso: return "lasso";
    case Family::ridge: return "ridge";
    case Family::random_forest: return "random_forest";
    case Family::gbt: return "gbt";
    case Family::glm: return "glm";
    }
    return "unknown";
}

std::string_view family_label(Family f) {
    switch (f) {
    case Family::lasso: return "Lasso";
    case Family::ridge: return "Ridge";
    case Family::random_forest: return "RF";
    case Family::gbt: return "GBT";
    case Family::glm: return "GLM";
    }
    return "?";
}

std::string_view family_long_label(Family f) {
    return f == Family::random_forest ? std::string_view{"Random Forest"} : family_label(f);
}

Family parse_family(std::string_view text) {
    std::string key(text);
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return c == '-' ? '_' : static_cast<char>(std::tolower(c)); });
    if (key == "rf") return Family::random_forest;
    for (Family f : kAllFamilies) {
        if (key == family_key(f)) return f;
    }
    throw ConfigError(fmt::format("unknown model family '{}'", text));
}

std::vector<Family> parse_family_list(std::string_view text) {
    std::vector<Family> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) {
            const Family f = parse_family(item);
            if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw ConfigError("empty model list");
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace nowcast
