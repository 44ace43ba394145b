#include "nowcast/metrics/report.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "nowcast/core/error.hpp"

namespace nowcast::metrics {

using json = nlohmann::ordered_json;

std::string_view metric_key(Metric m) {
    switch (m) {
    case Metric::smape: return "smape";
    case Metric::directional_symmetry: return "directional_symmetry";
    case Metric::theils_u: return "theils_u";
    }
    return "?";
}

std::string_view metric_title(Metric m) {
    switch (m) {
    case Metric::smape: return "SMAPE";
    case Metric::directional_symmetry: return "Directional Symmetry";
    case Metric::theils_u: return "Theil's U Coefficient";
    }
    return "?";
}

std::string DmRow::label() const {
    return fmt::format("{} vs {}", family_long_label(model1), family_long_label(model2));
}

namespace {

struct Point {
    Timestamp ts;
    double actual;
    double forecast;
};

using Track = std::vector<Point>;

std::string local_day(Timestamp ts, std::chrono::minutes offset) {
    return format_date(std::chrono::floor<std::chrono::days>(ts + offset));
}

std::vector<double> actuals(const Track& t) {
    std::vector<double> out;
    for (const auto& p : t) out.push_back(p.actual);
    return out;
}

std::vector<double> forecasts(const Track& t) {
    std::vector<double> out;
    for (const auto& p : t) out.push_back(p.forecast);
    return out;
}

std::optional<double> compute(Metric m, const Track& t, const ReportOptions& opt, std::string& note) {
    try {
        const auto y = actuals(t);
        const auto f = forecasts(t);
        switch (m) {
        case Metric::smape: return smape(y, f);
        case Metric::directional_symmetry: return directional_symmetry(y, f);
        case Metric::theils_u: return theils_u(y, f, opt.theil);
        }
    } catch (const Error& e) {
        note = e.what();
    }
    return std::nullopt;
}

void add_group(Report& r, const std::string& dataset, const std::string& group,
               const std::map<Family, Track>& tracks, const ReportOptions& opt) {
    for (Metric m : kAllMetrics) {
        for (Family f : kAllFamilies) {
            MetricCell cell{dataset, f, m, group, std::nullopt, {}};
            const auto it = tracks.find(f);
            if (it == tracks.end() || it->second.empty()) {
                cell.note = "absent";
            } else {
                cell.value = compute(m, it->second, opt, cell.note);
            }
            r.cells.push_back(std::move(cell));
        }
    }

    std::vector<Family> present;
    for (Family f : kAllFamilies) {
        const auto it = tracks.find(f);
        if (it != tracks.end() && !it->second.empty()) present.push_back(f);
    }
    if (present.size() < 2) {
        r.notices.push_back(fmt::format("{} ({}): fewer than two models, no DM comparisons", dataset, group));
    }
    for (std::size_t j = 1; j < present.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            DmRow row{dataset, group, present[j], present[i], std::nullopt, {}};
            std::map<Timestamp, double> other;
            for (const auto& p : tracks.at(row.model2)) other.emplace(p.ts, p.forecast);
            Track a;
            Track b;
            for (const auto& p : tracks.at(row.model1)) {
                const auto it = other.find(p.ts);
                if (it == other.end()) continue;
                a.push_back(p);
                b.push_back({p.ts, p.actual, it->second});
            }
            try {
                const auto l1 = point_losses(actuals(a), forecasts(a), opt.loss);
                const auto l2 = point_losses(actuals(b), forecasts(b), opt.loss);
                row.result = dm_test(l1, l2, opt.dm);
            } catch (const Error& e) {
                row.note = e.what();
            }
            r.dm.push_back(std::move(row));
        }
    }

    std::map<Timestamp, double> actual_by_ts;
    for (Family f : present) {
        const auto& t = tracks.at(f);
        r.boxes.push_back({dataset, group, fmt::format("smape:{}", family_key(f)),
                           box_summary(point_smape(actuals(t), forecasts(t)))});
        r.boxes.push_back({dataset, group, fmt::format("forecast:{}", family_key(f)), box_summary(forecasts(t))});
        for (const auto& p : t) actual_by_ts.emplace(p.ts, p.actual);
    }
    if (!actual_by_ts.empty()) {
        std::vector<double> ys;
        for (const auto& [ts, y] : actual_by_ts) ys.push_back(y);
        r.boxes.push_back({dataset, group, "actual", box_summary(ys)});
    }
}

}  // namespace

Report build_report(std::span<const DatasetLog> logs, const ReportOptions& options) {
    Report r;
    r.options = options;
    std::set<std::string> days;
    for (const auto& log : logs) {
        r.datasets.push_back(log.dataset);
        std::map<Family, Track> combined;
        std::map<std::string, std::map<Family, Track>> per_day;
        for (const auto& rec : log.records) {
            if (!rec.closed()) continue;
            const Point p{rec.timestamp, *rec.actual, rec.forecast};
            combined[rec.family].push_back(p);
            per_day[local_day(rec.timestamp, options.utc_offset)][rec.family].push_back(p);
        }
        const auto by_time = [](const Point& a, const Point& b) { return a.ts < b.ts; };
        for (auto& [f, t] : combined) std::stable_sort(t.begin(), t.end(), by_time);
        for (auto& [d, tracks] : per_day)
            for (auto& [f, t] : tracks) std::stable_sort(t.begin(), t.end(), by_time);

        add_group(r, log.dataset, kCombined, combined, options);
        for (const auto& [day, tracks] : per_day) {
            days.insert(day);
            add_group(r, log.dataset, day, tracks, options);
        }
    }
    r.days.assign(days.begin(), days.end());
    return r;
}

namespace {

std::string align(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c == 0) {
                line += fmt::format("{:<{}}", row[c], width[c]);
            } else {
                line += fmt::format("  {:>{}}", row[c], width[c]);
            }
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    return out;
}

std::string format_value(Metric m, double v) {
    switch (m) {
    case Metric::smape: return fmt::format("{:.5f}", v);
    case Metric::directional_symmetry: return fmt::format("{:.2f}", v);
    case Metric::theils_u: return fmt::format("{:.3f}", v);
    }
    return {};
}

bool in_grouping(const std::string& group, Grouping g) {
    return (group == kCombined) == (g == Grouping::combined);
}

std::string_view loss_key(Loss l) { return l == Loss::squared ? "squared" : "ape"; }

std::vector<std::string> groups_for(const Report& r, Grouping g) {
    if (g == Grouping::combined) return {kCombined};
    return r.days;
}

}  // namespace

std::string render_table(const Report& report, Grouping grouping) {
    std::string out;
    const auto groups = groups_for(report, grouping);
    const std::string suffix = grouping == Grouping::combined ? "Combined" : "Day-wise";

    for (Metric m : kAllMetrics) {
        out += fmt::format("{} ({})\n", metric_title(m), suffix);
        std::vector<std::vector<std::string>> rows;
        std::vector<std::string> header{grouping == Grouping::combined ? "Dataset / Model" : "Dataset / Day / Model"};
        for (Family f : kAllFamilies) header.emplace_back(family_label(f));
        rows.push_back(header);
        for (const auto& ds : report.datasets) {
            for (const auto& g : groups) {
                std::vector<std::string> row{grouping == Grouping::combined ? ds : fmt::format("{} {}", ds, g)};
                bool any = false;
                for (Family f : kAllFamilies) {
                    const auto it = std::find_if(report.cells.begin(), report.cells.end(), [&](const MetricCell& c) {
                        return c.dataset == ds && c.group == g && c.metric == m && c.model == f;
                    });
                    if (it == report.cells.end()) {
                        row.emplace_back("absent");
                        continue;
                    }
                    any = true;
                    if (it->value) {
                        row.push_back(format_value(m, *it->value));
                    } else {
                        row.emplace_back(it->note == "absent" ? "absent" : "n/a");
                    }
                }
                if (any) rows.push_back(std::move(row));
            }
        }
        out += align(rows) + "\n";
    }

    for (const auto& ds : report.datasets) {
        for (const auto& g : groups) {
            std::vector<std::vector<std::string>> rows{{"Model_1_Forecasts vs Model_2_Forecasts", "DM", "P-Value"}};
            for (const auto& row : report.dm) {
                if (row.dataset != ds || row.group != g) continue;
                if (row.result) {
                    rows.push_back({row.label(), fmt::format("{:.4f}", row.result->statistic),
                                    fmt::format("{:.7f}", row.result->p_value)});
                } else {
                    rows.push_back({row.label(), "n/a", "n/a"});
                }
            }
            out += fmt::format("Diebold-Mariano: {} ({}, loss={})\n", ds, g, loss_key(report.options.loss));
            if (rows.size() == 1) {
                out += "no model pairs to compare\n\n";
            } else {
                out += align(rows) + "\n";
            }
        }
    }

    for (const auto& ds : report.datasets) {
        for (const auto& g : groups) {
            std::vector<std::vector<std::string>> rows{
                {"Series", "n", "Whisker low", "Q1", "Median", "Q3", "Whisker high", "IQR", "Outliers"}};
            for (const auto& b : report.boxes) {
                if (b.dataset != ds || b.group != g) continue;
                const auto& x = b.box;
                rows.push_back({b.series, fmt::format("{}", x.count), fmt::format("{:.6g}", x.whisker_low),
                                fmt::format("{:.6g}", x.q1), fmt::format("{:.6g}", x.median),
                                fmt::format("{:.6g}", x.q3), fmt::format("{:.6g}", x.whisker_high),
                                fmt::format("{:.6g}", x.iqr), fmt::format("{}", x.outliers.size())});
            }
            if (rows.size() == 1) continue;
            out += fmt::format("Box summary: {} ({})\n", ds, g);
            out += align(rows) + "\n";
        }
    }

    for (const auto& n : report.notices) {
        const bool combined_notice = n.find(std::string("(") + kCombined + ")") != std::string::npos;
        if (combined_notice == (grouping == Grouping::combined)) out += "notice: " + n + "\n";
    }
    return out;
}

namespace {

json box_json(const BoxSummary& b) {
    return json{{"count", b.count},          {"median", b.median},         {"q1", b.q1},
                {"q3", b.q3},                {"iqr", b.iqr},               {"whisker_low", b.whisker_low},
                {"whisker_high", b.whisker_high}, {"outliers", b.outliers}};
}

BoxSummary box_from(const json& j) {
    BoxSummary b;
    b.count = j.at("count").get<std::size_t>();
    b.median = j.at("median").get<double>();
    b.q1 = j.at("q1").get<double>();
    b.q3 = j.at("q3").get<double>();
    b.iqr = j.at("iqr").get<double>();
    b.whisker_low = j.at("whisker_low").get<double>();
    b.whisker_high = j.at("whisker_high").get<double>();
    b.outliers = j.at("outliers").get<std::vector<double>>();
    return b;
}

json cell_json(const MetricCell& c) {
    json j{{"dataset", c.dataset},
           {"model", family_key(c.model)},
           {"metric", metric_key(c.metric)},
           {"group", c.group},
           {"value", c.value ? json(*c.value) : json(nullptr)}};
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

json dm_json(const DmRow& r) {
    json j{{"dataset", r.dataset},
           {"group", r.group},
           {"model_1", family_key(r.model1)},
           {"model_2", family_key(r.model2)},
           {"label", r.label()},
           {"dm", r.result ? json(r.result->statistic) : json(nullptr)},
           {"p_value", r.result ? json(r.result->p_value) : json(nullptr)},
           {"n", r.result ? json(r.result->n) : json(nullptr)}};
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

json boxrow_json(const BoxRow& b) {
    return json{{"dataset", b.dataset}, {"group", b.group}, {"series", b.series}, {"box", box_json(b.box)}};
}

Metric parse_metric(std::string_view s) {
    for (Metric m : kAllMetrics)
        if (metric_key(m) == s) return m;
    throw ParseError(fmt::format("unknown metric '{}'", s));
}

}  // namespace

std::string render_structured(const Report& report, Grouping grouping) {
    json j;
    j["grouping"] = grouping == Grouping::combined ? "combined" : "day";
    j["loss"] = loss_key(report.options.loss);
    j["cells"] = json::array();
    for (const auto& c : report.cells)
        if (in_grouping(c.group, grouping)) j["cells"].push_back(cell_json(c));
    j["dm"] = json::array();
    for (const auto& r : report.dm)
        if (in_grouping(r.group, grouping)) j["dm"].push_back(dm_json(r));
    j["boxes"] = json::array();
    for (const auto& b : report.boxes)
        if (in_grouping(b.group, grouping)) j["boxes"].push_back(boxrow_json(b));
    j["notices"] = report.notices;
    return j.dump(2) + "\n";
}

std::string report_to_json(const Report& r) {
    json j;
    j["options"] = {{"loss", loss_key(r.options.loss)},
                    {"theil", r.options.theil == TheilForm::u2 ? "u2" : "printed"},
                    {"dm_horizon", r.options.dm.horizon},
                    {"dm_small_sample_correction", r.options.dm.small_sample_correction},
                    {"utc_offset_minutes", r.options.utc_offset.count()}};
    j["datasets"] = r.datasets;
    j["days"] = r.days;
    j["cells"] = json::array();
    for (const auto& c : r.cells) j["cells"].push_back(cell_json(c));
    j["dm"] = json::array();
    for (const auto& d : r.dm) j["dm"].push_back(dm_json(d));
    j["boxes"] = json::array();
    for (const auto& b : r.boxes) j["boxes"].push_back(boxrow_json(b));
    j["notices"] = r.notices;
    return j.dump(2) + "\n";
}

Report report_from_json(std::string_view text) {
    try {
        const auto j = json::parse(text);
        Report r;
        const auto& o = j.at("options");
        r.options.loss = o.at("loss").get<std::string>() == "ape" ? Loss::absolute_percentage : Loss::squared;
        r.options.theil = o.at("theil").get<std::string>() == "printed" ? TheilForm::printed : TheilForm::u2;
        r.options.dm.horizon = o.at("dm_horizon").get<std::size_t>();
        r.options.dm.small_sample_correction = o.at("dm_small_sample_correction").get<bool>();
        r.options.utc_offset = std::chrono::minutes(o.at("utc_offset_minutes").get<long>());
        r.datasets = j.at("datasets").get<std::vector<std::string>>();
        r.days = j.at("days").get<std::vector<std::string>>();
        for (const auto& c : j.at("cells")) {
            MetricCell cell;
            cell.dataset = c.at("dataset").get<std::string>();
            cell.model = parse_family(c.at("model").get<std::string>());
            cell.metric = parse_metric(c.at("metric").get<std::string>());
            cell.group = c.at("group").get<std::string>();
            if (!c.at("value").is_null()) cell.value = c.at("value").get<double>();
            cell.note = c.value("note", "");
            r.cells.push_back(std::move(cell));
        }
        for (const auto& d : j.at("dm")) {
            DmRow row;
            row.dataset = d.at("dataset").get<std::string>();
            row.group = d.at("group").get<std::string>();
            row.model1 = parse_family(d.at("model_1").get<std::string>());
            row.model2 = parse_family(d.at("model_2").get<std::string>());
            if (!d.at("dm").is_null()) {
                row.result = DmResult{d.at("dm").get<double>(), d.at("p_value").get<double>(),
                                      d.at("n").get<std::size_t>()};
            }
            row.note = d.value("note", "");
            r.dm.push_back(std::move(row));
        }
        for (const auto& b : j.at("boxes")) {
            r.boxes.push_back({b.at("dataset").get<std::string>(), b.at("group").get<std::string>(),
                               b.at("series").get<std::string>(), box_from(b.at("box"))});
        }
        r.notices = j.at("notices").get<std::vector<std::string>>();
        return r;
    } catch (const json::exception& e) {
        throw ParseError(fmt::format("report file: {}", e.what()));
    } catch (const ConfigError& e) {
        throw ParseError(fmt::format("report file: {}", e.what()));
    }
}

}  // namespace nowcast::metrics
