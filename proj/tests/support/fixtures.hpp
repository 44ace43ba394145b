#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "nowcast/chaos/embedding.hpp"
#include "nowcast/core/series.hpp"
#include "oracles/linear_algebra.hpp"

namespace fixtures {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("nowcast_" + tag + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

struct Regression {
    oracle::Matrix x;
    std::vector<double> y;
    nowcast::chaos::DesignMatrix matrix{1};
};

/// y = 1.5 + x.beta + noise with x ~ U(-2, 3), beta ~ U(-1, 1).
inline Regression random_regression(std::size_t rows, std::size_t cols, std::uint64_t seed, double noise = 0.3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(-2.0, 3.0);
    std::uniform_real_distribution<double> ub(-1.0, 1.0);
    std::normal_distribution<double> e(0.0, noise);
    std::vector<double> beta(cols);
    for (auto& b : beta) b = ub(rng);
    Regression r;
    r.matrix = nowcast::chaos::DesignMatrix(cols);
    for (std::size_t i = 0; i < rows; ++i) {
        std::vector<double> row(cols);
        double y = 1.5;
        for (std::size_t j = 0; j < cols; ++j) {
            row[j] = ux(rng);
            y += beta[j] * row[j];
        }
        y += e(rng);
        r.x.push_back(row);
        r.y.push_back(y);
        r.matrix.add_row(row, y);
    }
    return r;
}

inline double relative_diff(double a, double b) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) / scale;
}

/// Timestamps every 5 minutes from 2024-09-02T09:35Z.
inline nowcast::PriceSeries series_from(const std::vector<double>& values, const std::string& symbol = "TEST") {
    using namespace std::chrono;
    const nowcast::Timestamp start = sys_days{year{2024} / 9 / 2} + hours{9} + minutes{35};
    std::vector<nowcast::PricePoint> pts;
    for (std::size_t i = 0; i < values.size(); ++i) pts.push_back({start + minutes{5 * static_cast<long>(i)}, values[i]});
    return nowcast::PriceSeries(symbol, std::move(pts));
}

}  // namespace fixtures
