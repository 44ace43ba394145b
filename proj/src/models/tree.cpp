#include "nowcast/models/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast::models {

RegressionTree::RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw std::invalid_argument("RegressionTree: no nodes");
}

double RegressionTree::predict(std::span<const double> features) const {
    std::size_t i = 0;
    while (!nodes_[i].is_leaf()) {
        const auto& n = nodes_[i];
        i = static_cast<std::size_t>(features[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                                   : n.right);
    }
    return nodes_[i].value;
}

std::size_t RegressionTree::depth() const {
    std::vector<std::size_t> d(nodes_.size(), 0);
    std::size_t best = 0;
    // Children always follow their parent in the flat layout.
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (n.is_leaf()) {
            best = std::max(best, d[i]);
        } else {
            d[static_cast<std::size_t>(n.left)] = d[i] + 1;
            d[static_cast<std::size_t>(n.right)] = d[i] + 1;
        }
    }
    return best;
}

std::size_t RegressionTree::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

struct NodeTotals {
    double sum = 0.0;
    std::size_t count = 0;
    bool constant = true;
};

NodeTotals totals(std::span<const double> targets, std::span<const std::size_t> rows) {
    NodeTotals t;
    t.count = rows.size();
    const double first = targets[rows[0]];
    for (std::size_t r : rows) {
        t.sum += targets[r];
        if (targets[r] != first) t.constant = false;
    }
    return t;
}

class ExactGrower {
public:
    ExactGrower(const DesignMatrix& m, std::span<const double> y, const TreeSettings& s, std::mt19937_64* rng)
        : m_(m), y_(y), s_(s), rng_(rng) {}

    std::vector<TreeNode> grow(std::vector<std::size_t> rows) {
        build(std::move(rows), 0);
        return std::move(nodes_);
    }

private:
    int build(std::vector<std::size_t> rows, int depth) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        const NodeTotals t = totals(y_, rows);
        nodes_[id].value = t.sum / static_cast<double>(t.count);
        nodes_[id].samples = t.count;

        const auto min_inst = static_cast<std::size_t>(s_.min_instances_per_node);
        if (depth >= s_.max_depth || t.constant || t.count < 2 * min_inst) return id;

        const std::size_t p = m_.feature_count();
        std::vector<std::size_t> order(p);
        std::iota(order.begin(), order.end(), 0);
        std::size_t k = p;
        if (s_.features_per_split > 0 && s_.features_per_split < p && rng_ != nullptr) {
            k = s_.features_per_split;
            for (std::size_t i = 0; i < k; ++i) {
                std::uniform_int_distribution<std::size_t> pick(i, p - 1);
                std::swap(order[i], order[pick(*rng_)]);
            }
        }
        Split best = search(rows, t, std::span(order).first(k));
        if (best.feature < 0 && k < p) {
            std::vector<std::size_t> rest(order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
            std::sort(rest.begin(), rest.end());
            best = search(rows, t, rest);
        }
        if (best.feature < 0) return id;

        std::vector<std::size_t> left, right;
        for (std::size_t r : rows) {
            (m_.at(r, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();
        nodes_[id].feature = best.feature;
        nodes_[id].threshold = best.threshold;
        const int l = build(std::move(left), depth + 1);
        nodes_[id].left = l;
        const int r = build(std::move(right), depth + 1);
        nodes_[id].right = r;
        return id;
    }

    Split search(const std::vector<std::size_t>& rows, const NodeTotals& t, std::span<const std::size_t> features) {
        Split best;
        const auto min_inst = static_cast<std::size_t>(s_.min_instances_per_node);
        const double n = static_cast<double>(t.count);
        const double parent = t.sum * t.sum / n;
        std::vector<std::size_t> sorted(rows);
        for (std::size_t f : features) {
            std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                const double xa = m_.at(a, f), xb = m_.at(b, f);
                return xa < xb || (xa == xb && a < b);
            });
            double left_sum = 0.0;
            for (std::size_t i = 1; i < sorted.size(); ++i) {
                left_sum += y_[sorted[i - 1]];
                const double lo = m_.at(sorted[i - 1], f);
                const double hi = m_.at(sorted[i], f);
                if (i < min_inst || sorted.size() - i < min_inst || !(lo < hi)) continue;
                const double nl = static_cast<double>(i);
                const double right_sum = t.sum - left_sum;
                const double gain = left_sum * left_sum / nl + right_sum * right_sum / (n - nl) - parent;
                if (gain > best.gain) {
                    double thr = lo + (hi - lo) / 2.0;
                    if (!(thr < hi)) thr = lo;
                    best = {static_cast<int>(f), thr, gain};
                }
            }
        }
        return best;
    }

    const DesignMatrix& m_;
    std::span<const double> y_;
    const TreeSettings& s_;
    std::mt19937_64* rng_;
    std::vector<TreeNode> nodes_;
};

class BinnedGrower {
public:
    BinnedGrower(const BinnedFeatures& b, std::span<const double> y, const TreeSettings& s)
        : b_(b), y_(y), s_(s) {}

    std::vector<TreeNode> grow() {
        std::vector<std::size_t> rows(b_.rows);
        std::iota(rows.begin(), rows.end(), 0);
        build(std::move(rows), 0);
        return std::move(nodes_);
    }

private:
    int build(std::vector<std::size_t> rows, int depth) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        const NodeTotals t = totals(y_, rows);
        nodes_[id].value = t.sum / static_cast<double>(t.count);
        nodes_[id].samples = t.count;
        const auto min_inst = static_cast<std::size_t>(s_.min_instances_per_node);
        if (depth >= s_.max_depth || t.constant || t.count < 2 * min_inst) return id;

        const double n = static_cast<double>(t.count);
        const double parent = t.sum * t.sum / n;
        int best_f = -1;
        std::size_t best_bin = 0;
        double best_gain = 0.0;
        std::vector<double> sums;
        std::vector<std::size_t> counts;
        for (std::size_t f = 0; f < b_.features; ++f) {
            const std::size_t nb = b_.bin_count(f);
            sums.assign(nb, 0.0);
            counts.assign(nb, 0);
            for (std::size_t r : rows) {
                const auto bin = b_.bin(r, f);
                sums[bin] += y_[r];
                ++counts[bin];
            }
            double left_sum = 0.0;
            std::size_t left_n = 0;
            for (std::size_t bin = 0; bin + 1 < nb; ++bin) {
                left_sum += sums[bin];
                left_n += counts[bin];
                if (counts[bin] == 0) continue;  // same partition as the previous boundary
                const std::size_t right_n = t.count - left_n;
                if (left_n < min_inst || right_n < min_inst || left_n == 0 || right_n == 0) continue;
                const double right_sum = t.sum - left_sum;
                const double gain = left_sum * left_sum / static_cast<double>(left_n) +
                                    right_sum * right_sum / static_cast<double>(right_n) - parent;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_f = static_cast<int>(f);
                    best_bin = bin;
                }
            }
        }
        if (best_f < 0) return id;

        const auto f = static_cast<std::size_t>(best_f);
        std::vector<std::size_t> left, right;
        for (std::size_t r : rows) (b_.bin(r, f) <= best_bin ? left : right).push_back(r);
        rows.clear();
        rows.shrink_to_fit();
        nodes_[id].feature = best_f;
        nodes_[id].threshold = b_.thresholds[f][best_bin];
        const int l = build(std::move(left), depth + 1);
        nodes_[id].left = l;
        const int r = build(std::move(right), depth + 1);
        nodes_[id].right = r;
        return id;
    }

    const BinnedFeatures& b_;
    std::span<const double> y_;
    const TreeSettings& s_;
    std::vector<TreeNode> nodes_;
};

void check_settings(const TreeSettings& s) {
    if (s.max_depth < 1) throw std::invalid_argument("tree: max_depth must be >= 1");
    if (s.min_instances_per_node < 1) throw std::invalid_argument("tree: min_instances_per_node must be >= 1");
}

// Type-7 quantile of sorted data.
double sorted_quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

RegressionTree grow_exact_tree(const DesignMatrix& matrix, std::span<const double> targets,
                               std::span<const std::size_t> rows, const TreeSettings& settings,
                               std::mt19937_64* rng) {
    check_settings(settings);
    if (rows.empty()) throw LengthError("tree: no training rows");
    if (targets.size() != matrix.rows()) throw ShapeError("tree: target count does not match matrix rows");
    ExactGrower g(matrix, targets, settings, rng);
    return RegressionTree(g.grow(std::vector<std::size_t>(rows.begin(), rows.end())));
}

BinnedFeatures bin_features(const DesignMatrix& matrix, int max_bins) {
    if (max_bins < 2) throw std::invalid_argument("bin_features: max_bins must be >= 2");
    if (max_bins > 65535) throw std::invalid_argument("bin_features: max_bins too large");
    BinnedFeatures out;
    out.rows = matrix.rows();
    out.features = matrix.feature_count();
    out.thresholds.resize(out.features);
    out.bins.resize(out.rows * out.features);

    std::vector<double> column(out.rows);
    for (std::size_t f = 0; f < out.features; ++f) {
        for (std::size_t r = 0; r < out.rows; ++r) column[r] = matrix.at(r, f);
        std::sort(column.begin(), column.end());
        std::vector<double> unique(column);
        unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

        auto& thr = out.thresholds[f];
        if (unique.size() <= static_cast<std::size_t>(max_bins)) {
            for (std::size_t i = 1; i < unique.size(); ++i) {
                double t = unique[i - 1] + (unique[i] - unique[i - 1]) / 2.0;
                if (!(t < unique[i])) t = unique[i - 1];
                thr.push_back(t);
            }
        } else {
            for (int k = 1; k < max_bins; ++k) {
                const double t = sorted_quantile(column, static_cast<double>(k) / max_bins);
                if (t < unique.back() && (thr.empty() || t > thr.back())) thr.push_back(t);
            }
        }
        for (std::size_t r = 0; r < out.rows; ++r) {
            const auto it = std::lower_bound(thr.begin(), thr.end(), matrix.at(r, f));
            out.bins[r * out.features + f] = static_cast<std::uint16_t>(it - thr.begin());
        }
    }
    return out;
}

RegressionTree grow_binned_tree(const BinnedFeatures& binned, std::span<const double> targets,
                                const TreeSettings& settings) {
    check_settings(settings);
    if (binned.rows == 0) throw LengthError("tree: no training rows");
    if (targets.size() != binned.rows) throw ShapeError("tree: target count does not match binned rows");
    BinnedGrower g(binned, targets, settings);
    return RegressionTree(g.grow());
}

}  // namespace nowcast::models
