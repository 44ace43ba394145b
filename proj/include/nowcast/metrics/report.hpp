#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nowcast/core/family.hpp"
#include "nowcast/core/forecast_record.hpp"
#include "nowcast/metrics/accuracy.hpp"
#include "nowcast/metrics/box_summary.hpp"
#include "nowcast/metrics/diebold_mariano.hpp"

namespace nowcast::metrics {

inline constexpr const char* kCombined = "combined";

enum class Metric { smape, directional_symmetry, theils_u };
std::string_view metric_key(Metric m);
std::string_view metric_title(Metric m);
inline constexpr Metric kAllMetrics[] = {Metric::smape, Metric::directional_symmetry, Metric::theils_u};

/// One table cell. An empty value means the model was absent or the metric
/// was undefined; `note` says which.
struct MetricCell {
    std::string dataset;
    Family model = Family::ridge;
    Metric metric = Metric::smape;
    std::string group;  ///< "combined" or a local date
    std::optional<double> value;
    std::string note;
};

/// "Model_1 vs Model_2"; the statistic is positive when model_1 has larger losses.
struct DmRow {
    std::string dataset;
    std::string group;
    Family model1 = Family::ridge;
    Family model2 = Family::lasso;
    std::optional<DmResult> result;
    std::string note;

    std::string label() const;
};

struct BoxRow {
    std::string dataset;
    std::string group;
    std::string series;  ///< "smape:<model>", "forecast:<model>" or "actual"
    BoxSummary box;
};

struct ReportOptions {
    Loss loss = Loss::squared;
    TheilForm theil = TheilForm::u2;
    DmOptions dm;
    std::chrono::minutes utc_offset{0};  ///< for local session dates
};

struct DatasetLog {
    std::string dataset;
    std::vector<ForecastRecord> records;  ///< open records are ignored
};

struct Report {
    ReportOptions options;
    std::vector<std::string> datasets;
    std::vector<std::string> days;  ///< every local date seen, ascending
    std::vector<MetricCell> cells;  ///< combined and per day, every family
    std::vector<DmRow> dm;          ///< pairs among the models present
    std::vector<BoxRow> boxes;
    std::vector<std::string> notices;
};

/**
 * Metric tables for every dataset x family x group (combined and each local
 * day), the pairwise DM table in (later vs earlier) family order, box
 * summaries of per-point SMAPE per day and of actual vs forecast values.
 */
Report build_report(std::span<const DatasetLog> logs, const ReportOptions& options = {});

enum class Grouping { combined, per_day };

/// Aligned text tables for one grouping.
std::string render_table(const Report& report, Grouping grouping);

/// JSON with one object per cell / DM row / box, filtered to the grouping.
std::string render_structured(const Report& report, Grouping grouping);

/// Full report as JSON, and back. Throws ParseError.
std::string report_to_json(const Report& report);
Report report_from_json(std::string_view text);

}  // namespace nowcast::metrics
