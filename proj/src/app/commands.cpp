#include "nowcast/app/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "nowcast/app/run_config.hpp"
#include "nowcast/core/error.hpp"
#include "nowcast/engine/calibration.hpp"
#include "nowcast/engine/nowcaster.hpp"
#include "nowcast/engine/session.hpp"
#include "nowcast/ingest/csv.hpp"
#include "nowcast/ingest/forecast_log.hpp"
#include "nowcast/ingest/poller.hpp"
#include "nowcast/ingest/replay.hpp"
#include "nowcast/metrics/report.hpp"

namespace nowcast::app {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

/// Input that failed validation: exit code 1.
struct Invalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename F>
auto load(F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw Invalid(e.what());
    }
}

struct EvaluateOptions {
    std::vector<std::string> logs;
    std::string loss = "squared";
    std::string report;
    std::string utc_offset = "+00:00";
    std::string theil = "u2";
    bool hln = false;
    std::size_t horizon = 1;
};

struct ReportOptions {
    std::string report;
    std::string format = "table";
    std::string group = "combined";
};

void add_chaos_options(CLI::App* sub, RunConfig& c, RawOptions& raw) {
    sub->add_option("--max-lag", c.max_lag, "Largest PACF lag considered")->capture_default_str();
    sub->add_option("--max-dim", c.max_dim, "Largest embedding dimension considered")->capture_default_str();
    sub->add_option("--saturation-tol", c.saturation_tol, "Cao E1 plateau tolerance")->capture_default_str();
    sub->add_option("--lyapunov-steps", c.lyapunov_steps, "Divergence steps for the Lyapunov fit")
        ->capture_default_str();
    sub->add_option("--sessions", c.sessions, "Trailing sessions used for calibration")->capture_default_str();
    sub->add_option("--window", c.window, "Sliding window size W")->capture_default_str();
    sub->add_option("--session-open", raw.session_open, "Session open, local HH:MM")->capture_default_str();
    sub->add_option("--session-close", raw.session_close, "Session close, local HH:MM")->capture_default_str();
    sub->add_option("--utc-offset", raw.utc_offset, "Market local time offset from UTC")->capture_default_str();
}

void add_engine_options(CLI::App* sub, RunConfig& c, RawOptions& raw) {
    add_chaos_options(sub, c, raw);
    sub->add_option("--interval", raw.interval, "Tick interval, e.g. 300s or 5m")->capture_default_str();
    sub->add_option("--models", raw.models, "Comma-separated model families")->capture_default_str();
    sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
    sub->add_option("--tolerance", c.tolerance, "Retrain tolerance on train MSE")->capture_default_str();
    sub->add_option("--retrain-mode", raw.retrain_mode, "exceed or symmetric")->capture_default_str();
    sub->add_option("--tuning", raw.tuning, "Grid search on every-retrain or daily")->capture_default_str();
    sub->add_option("--stride", c.stride, "Row stride of the embedding")->capture_default_str();
    sub->add_option("--split", c.split, "Holdout fraction of the grid search")->capture_default_str();
    sub->add_flag("--parallel,!--sequential", c.parallel, "Retrain families concurrently")->capture_default_str();
    sub->add_option("--out", c.out, "Forecast log path")->required();
    sub->add_flag("--resume", c.resume, "Append to an existing log, skipping logged ticks");
    sub->add_option("--config", "Config file of key = value lines mirroring the flags");
}

/// Config file items become --key=value arguments placed before the real
/// ones; the take-last policy then lets flags override the file.
std::vector<std::string> expand_config(const std::vector<std::string>& args, CLI::App& app) {
    std::string path;
    std::size_t sub_index = args.size();
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
        if (sub_index == args.size() && !args[i].empty() && args[i][0] != '-') sub_index = i;
    }
    if (path.empty() || sub_index == args.size()) return args;
    CLI::App* sub = app.get_subcommand_no_throw(args[sub_index]);
    if (!sub) return args;

    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML().from_file(path);
    } catch (const CLI::Error& e) {
        throw ConfigError(fmt::format("config '{}': {}", path, e.what()));
    }
    std::vector<std::string> injected;
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue;  // section markers
        if (!item.parents.empty()) {
            throw ConfigError(fmt::format("config '{}': sections are not supported ({})", path, item.fullname()));
        }
        const std::string flag = "--" + item.name;
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        if (!opt || item.name == "config") {
            throw ConfigError(fmt::format("config '{}': unknown key '{}'", path, item.name));
        }
        // list-valued keys arrive split on commas
        if (opt->get_multi_option_policy() == CLI::MultiOptionPolicy::TakeAll) {
            for (const auto& v : item.inputs) injected.push_back(flag + "=" + v);
        } else {
            injected.push_back(flag + "=" + CLI::detail::join(item.inputs, ","));
        }
    }
    std::vector<std::string> out(args.begin(), args.begin() + static_cast<long>(sub_index) + 1);
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), args.begin() + static_cast<long>(sub_index) + 1, args.end());
    return out;
}

json calibration_json(const engine::Calibration& cal, const PriceSeries& used) {
    json j;
    j["symbol"] = used.symbol();
    j["points"] = used.size();
    j["from"] = format_rfc3339(used.points().front().timestamp);
    j["to"] = format_rfc3339(used.points().back().timestamp);
    j["lag"] = cal.params.lag;
    j["embedding_dim"] = cal.params.embedding_dim;
    j["lyapunov"] = cal.params.lyapunov;
    j["chaotic"] = cal.params.chaotic;
    j["dim_saturated"] = cal.params.dim_saturated;
    j["pacf"] = cal.pacf;
    json profile = json::array();
    for (std::size_t i = 0; i < cal.cao.e1.size(); ++i) {
        profile.push_back({{"d", i + 1}, {"e1", cal.cao.e1[i]}, {"e2", cal.cao.e2[i]}});
    }
    j["cao"] = profile;
    return j;
}

int cmd_analyze(const RunConfig& c, std::ostream& out) {
    const auto series = load([&] { return ingest::read_series_csv(c.input); });
    const auto recent = engine::trailing_sessions(series, c.sessions, c.window, c.hours);
    auto cal_cfg = engine_config(c).calibration;
    cal_cfg.min_points = std::min(c.window, recent.size());
    const auto cal = engine::calibrate_day(recent, cal_cfg);

    out << fmt::format("symbol:        {}\n", recent.symbol());
    out << fmt::format("points:        {} ({} .. {})\n", recent.size(),
                       format_rfc3339(recent.points().front().timestamp),
                       format_rfc3339(recent.points().back().timestamp));
    out << fmt::format("lag:           {}\n", cal.params.lag);
    out << fmt::format("embedding_dim: {}\n", cal.params.embedding_dim);
    out << fmt::format("lyapunov:      {:.6f}\n", cal.params.lyapunov);
    out << fmt::format("chaotic:       {}\n", cal.params.chaotic);
    out << fmt::format("dim_saturated: {}\n", cal.params.dim_saturated);
    out << "\nd   E1        E2\n";
    for (std::size_t i = 0; i < cal.cao.e1.size(); ++i) {
        out << fmt::format("{:<3} {:<9.6f} {:.6f}\n", i + 1, cal.cao.e1[i], cal.cao.e2[i]);
    }
    if (!c.out.empty()) {
        std::ofstream f(c.out, std::ios::trunc);
        f << calibration_json(cal, recent).dump(2) << "\n";
        if (!f) throw IoError(fmt::format("cannot write '{}'", c.out));
    }
    return kExitOk;
}

int finish_session(const engine::SessionSummary& s, const engine::Nowcaster& engine,
                   const ingest::ForecastLogWriter& log, std::ostream& out, std::ostream& err) {
    out << fmt::format("ticks processed: {}\n", s.ticks_processed);
    out << fmt::format("ticks skipped:   {}\n", s.ticks_skipped);
    out << fmt::format("records logged:  {} ({} closed)\n", log.written(), s.records);
    out << fmt::format("calibrations:    {}\n", s.recalibrations);
    if (const auto& cal = engine.calibration()) {
        const auto& p = cal->params;
        out << fmt::format("last chaos:      lag={} m={} lyapunov={:.6f} chaotic={}\n", p.lag, p.embedding_dim,
                           p.lyapunov, p.chaotic);
    }
    for (const auto& slot : engine.state().slots) {
        out << fmt::format("retrains {:<14} {}\n", family_key(slot.family), slot.retrain_count);
    }
    for (const auto& g : s.gaps) {
        out << fmt::format("gap: expected {} resumed {} missed {} ({})\n", format_rfc3339(g.expected),
                           format_rfc3339(g.resumed), g.missed_slots, g.reason);
    }
    if (!s.ok()) {
        err << "session halted: " << s.failure_message << "\n";
        if (s.last_tick) err << "last processed tick: " << format_rfc3339(*s.last_tick) << "; rerun with --resume\n";
        return kExitFailed;
    }
    return kExitOk;
}

int run_engine(const RunConfig& c, const PriceSeries& warm, TickSource& source, std::ostream& out,
               std::ostream& err) {
    engine::Nowcaster nowcaster(engine_config(c), warm);
    ingest::ForecastLogWriter log(c.out, c.resume ? ingest::ForecastLogWriter::Mode::resume
                                                  : ingest::ForecastLogWriter::Mode::truncate);
    engine::SessionOptions opts;
    opts.stop_at = c.stop_at;
    const auto summary = engine::run_session(
        source, nowcaster, [&](std::span<const ForecastRecord> r) { log.append(r); }, opts);
    return finish_session(summary, nowcaster, log, out, err);
}

int cmd_replay(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto series = load([&] { return ingest::read_series_csv(c.input); });
    if (series.size() < c.window) {
        throw Invalid(fmt::format("input has {} points, the warm-up alone needs --window {}", series.size(), c.window));
    }
    const auto warm = series.slice(0, c.window);
    auto rest = series.slice(c.window, series.size());
    if (c.start_at) {
        std::size_t b = 0;
        while (b < rest.size() && rest[b].timestamp < *c.start_at) ++b;
        rest = rest.slice(b, rest.size());
    }
    ingest::ReplayOptions ro;
    ro.interval = c.interval;
    ro.speedup = c.speedup;
    ingest::ReplaySource source(rest, ro);
    return run_engine(c, warm, source, out, err);
}

int cmd_live(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto warm = load([&] { return ingest::read_series_csv(c.history); });
    ingest::PollerOptions po;
    po.url = c.endpoint;
    po.symbol = c.symbol.empty() ? warm.symbol() : c.symbol;
    po.mapping = load([&] { return ingest::parse_field_mapping(c.mapping); });
    po.interval = c.interval;
    po.start_at = c.start_at;
    RunConfig run = c;
    if (!run.stop_at) {
        const auto now = std::chrono::floor<Seconds>(std::chrono::system_clock::now());
        run.stop_at = c.hours.close_at(c.hours.local_date(now));
    }
    po.stop_at = run.stop_at;
    ingest::HttpQuotePoller poller(po);
    return run_engine(run, warm, poller, out, err);
}

int cmd_evaluate(const EvaluateOptions& e, std::ostream& out) {
    metrics::ReportOptions ro;
    if (e.loss == "squared") {
        ro.loss = metrics::Loss::squared;
    } else if (e.loss == "ape") {
        ro.loss = metrics::Loss::absolute_percentage;
    } else {
        throw Invalid(fmt::format("--loss: expected squared or ape, got '{}'", e.loss));
    }
    if (e.theil == "u2") {
        ro.theil = metrics::TheilForm::u2;
    } else if (e.theil == "printed") {
        ro.theil = metrics::TheilForm::printed;
    } else {
        throw Invalid(fmt::format("--theil: expected u2 or printed, got '{}'", e.theil));
    }
    if (e.horizon < 1) throw Invalid("--horizon: must be >= 1");
    ro.dm.horizon = e.horizon;
    ro.dm.small_sample_correction = e.hln;
    ro.utc_offset = load([&] { return parse_utc_offset(e.utc_offset); });

    std::vector<metrics::DatasetLog> logs;
    std::map<std::string, int> seen;
    for (const auto& path : e.logs) {
        std::string name = fs::path(path).stem().string();
        if (const int n = seen[name]++; n > 0) name += fmt::format("_{}", n + 1);
        logs.push_back({name, load([&] { return ingest::read_forecast_log(path); })});
    }
    const auto report = metrics::build_report(logs, ro);
    std::ofstream f(e.report, std::ios::trunc);
    f << metrics::report_to_json(report);
    f.flush();
    if (!f) throw IoError(fmt::format("cannot write report '{}'", e.report));
    out << metrics::render_table(report, metrics::Grouping::combined);
    return kExitOk;
}

int cmd_report(const ReportOptions& r, std::ostream& out) {
    if (r.format != "table" && r.format != "structured") {
        throw Invalid(fmt::format("--format: expected table or structured, got '{}'", r.format));
    }
    if (r.group != "combined" && r.group != "day") {
        throw Invalid(fmt::format("--group: expected day or combined, got '{}'", r.group));
    }
    const auto report = load([&] {
        std::ifstream in(r.report);
        if (!in) throw IoError(fmt::format("cannot open report '{}'", r.report));
        std::stringstream ss;
        ss << in.rdbuf();
        return metrics::report_from_json(ss.str());
    });
    const auto grouping = r.group == "day" ? metrics::Grouping::per_day : metrics::Grouping::combined;
    out << (r.format == "table" ? metrics::render_table(report, grouping)
                                : metrics::render_structured(report, grouping));
    return kExitOk;
}

}  // namespace

namespace {

struct Cli {
    CLI::App app{"Chaos-based streaming nowcaster for 5-minute price series", "nowcast"};
    RunConfig c;
    RawOptions raw;
    EvaluateOptions ev;
    ReportOptions rep;
    CLI::App* analyze = nullptr;
    CLI::App* replay = nullptr;
    CLI::App* live = nullptr;
    CLI::App* evaluate = nullptr;
    CLI::App* report = nullptr;

    Cli();
    /// Throws CLI::ParseError or ConfigError.
    void parse(const std::vector<std::string>& args) {
        auto expanded = expand_config(args, app);
        std::reverse(expanded.begin(), expanded.end());
        app.parse(expanded);
    }
    bool engine_command() const { return analyze->parsed() || replay->parsed() || live->parsed(); }
};

Cli::Cli() {
    app.require_subcommand(1, 1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    analyze = app.add_subcommand("analyze", "Estimate lag, embedding dimension and Lyapunov exponent");
    analyze->add_option("--input", c.input, "Price CSV")->required()->check(CLI::ExistingFile);
    add_chaos_options(analyze, c, raw);
    analyze->add_option("--out", c.out, "Also write the calibration as JSON");
    analyze->add_option("--config", "Config file of key = value lines mirroring the flags");

    replay = app.add_subcommand("replay", "Run the nowcaster over a price CSV");
    replay->add_option("--input", c.input, "Price CSV; the first --window points are the warm-up")
        ->required()
        ->check(CLI::ExistingFile);
    replay->add_option("--speedup", raw.speedup, "Replay acceleration, or inf")->capture_default_str();
    replay->add_option("--start-at", raw.start_at, "Skip ticks before this RFC 3339 time");
    replay->add_option("--stop-at", raw.stop_at, "Stop after this RFC 3339 time");
    add_engine_options(replay, c, raw);

    live = app.add_subcommand("live", "Run the nowcaster on a polled quote endpoint");
    live->add_option("--endpoint", c.endpoint, "Quote URL")->required();
    live->add_option("--map", c.mapping, "Field mapping, e.g. price=/close,timestamp=/time")->required();
    live->add_option("--history", c.history, "Price CSV with at least --window points of warm-up")
        ->required()
        ->check(CLI::ExistingFile);
    live->add_option("--symbol", c.symbol, "Symbol for emitted ticks (default: the history's)");
    live->add_option("--start-at", raw.start_at, "First poll slot, RFC 3339");
    live->add_option("--stop-at", raw.stop_at, "End of polling, RFC 3339 (default: today's close)");
    add_engine_options(live, c, raw);

    evaluate = app.add_subcommand("evaluate", "Compute accuracy metrics and DM tests from forecast logs");
    evaluate->add_option("--log", ev.logs, "Forecast log; repeat for several datasets")
        ->required()
        ->check(CLI::ExistingFile)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    evaluate->add_option("--loss", ev.loss, "DM loss: squared or ape")->capture_default_str();
    evaluate->add_option("--report", ev.report, "Report output (JSON)")->required();
    evaluate->add_option("--utc-offset", ev.utc_offset, "Offset used to assign records to local days")
        ->capture_default_str();
    evaluate->add_option("--theil", ev.theil, "u2 or printed")->capture_default_str();
    evaluate->add_option("--horizon", ev.horizon, "DM forecast horizon")->capture_default_str();
    evaluate->add_flag("--hln", ev.hln, "Harvey-Leybourne-Newbold small-sample correction");

    report = app.add_subcommand("report", "Render a report produced by evaluate");
    report->add_option("--report", rep.report, "Report file")->required()->check(CLI::ExistingFile);
    report->add_option("--format", rep.format, "table or structured")->capture_default_str();
    report->add_option("--group", rep.group, "day or combined")->capture_default_str();
}

}  // namespace

RunConfig parse_run_config(const std::vector<std::string>& args) {
    Cli cli;
    try {
        cli.parse(args);
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    if (!cli.engine_command()) throw ConfigError("not an analyze, replay or live command");
    finalize(cli.c, cli.raw);
    return cli.c;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Cli cli;
    auto& app = cli.app;
    try {
        cli.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kExitInvalid;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }

    try {
        if (cli.engine_command()) finalize(cli.c, cli.raw);
        if (cli.analyze->parsed()) return cmd_analyze(cli.c, out);
        if (cli.replay->parsed()) return cmd_replay(cli.c, out, err);
        if (cli.live->parsed()) return cmd_live(cli.c, out, err);
        if (cli.evaluate->parsed()) return cmd_evaluate(cli.ev, out);
        return cmd_report(cli.rep, out);
    } catch (const Invalid& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "failed: " << e.what() << "\n";
        return kExitFailed;
    }
}

}  // namespace nowcast::app
