#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "nowcast/app/commands.hpp"
#include "nowcast/app/run_config.hpp"
#include "nowcast/core/error.hpp"
#include "nowcast/ingest/csv.hpp"
#include "nowcast/ingest/forecast_log.hpp"
#include "nowcast/synth/generators.hpp"
#include "support/fixtures.hpp"

using namespace nowcast;
using namespace nowcast::app;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::filesystem::path> listing(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(dir)) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::string write_sessions(const fixtures::TempDir& dir, std::size_t sessions, const std::string& name = "synth.csv") {
    synth::SessionSpec spec;
    spec.sessions = sessions;
    const auto path = dir.file(name).string();
    ingest::write_series_csv(path, synth::chaotic_sessions(spec));
    return path;
}

std::string write_logistic(const fixtures::TempDir& dir) {
    synth::SessionSpec spec;
    const auto path = dir.file("logistic.csv").string();
    ingest::write_series_csv(path, synth::as_session_series(synth::logistic_map(2000, 0.3), spec));
    return path;
}

}  // namespace

TEST(Analyze, LogisticFixtureIsChaotic) {
    fixtures::TempDir dir("analyze");
    const auto input = write_logistic(dir);
    const auto before = listing(dir.path());
    const auto r = run({"analyze", "--input", input});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("chaotic:       true"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("E1"), std::string::npos);
    EXPECT_EQ(listing(dir.path()), before);
}

TEST(Analyze, BoundsAreHonoured) {
    fixtures::TempDir dir("bounds");
    const auto input = write_logistic(dir);
    const auto r = run({"analyze", "--input", input, "--max-lag", "5", "--max-dim", "4"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out.find("\n5   "), std::string::npos) << r.out;
}

TEST(Replay, TwoRunsGiveIdenticalLogs) {
    fixtures::TempDir dir("replay");
    const auto input = write_sessions(dir, 1);
    const auto a = dir.file("a.log").string(), b = dir.file("b.log").string(), c = dir.file("c.log").string();
    ASSERT_EQ(run({"replay", "--input", input, "--seed", "7", "--out", a}).code, kExitOk);
    ASSERT_EQ(run({"replay", "--input", input, "--seed", "7", "--out", b}).code, kExitOk);
    ASSERT_EQ(run({"replay", "--input", input, "--seed", "7", "--sequential", "--out", c}).code, kExitOk);
    const auto bytes = slurp(a);
    EXPECT_EQ(std::count(bytes.begin(), bytes.end(), '\n'), 360);
    EXPECT_EQ(bytes, slurp(b));
    EXPECT_EQ(bytes, slurp(c));
}

TEST(Replay, ResumeCompletesWithoutDuplicates) {
    fixtures::TempDir dir("resume");
    const auto input = write_sessions(dir, 1);
    const auto full = dir.file("full.log").string(), part = dir.file("part.log").string();
    ASSERT_EQ(run({"replay", "--input", input, "--models", "ridge,glm", "--out", full}).code, kExitOk);
    const auto records = ingest::read_forecast_log(full);
    ASSERT_EQ(records.size(), 144u);
    ingest::append_forecast_log(part, std::span(records).first(40));
    ASSERT_EQ(run({"replay", "--input", input, "--models", "ridge,glm", "--resume", "--out", part}).code, kExitOk);
    EXPECT_EQ(slurp(part), slurp(full));
    // without --resume the log is rewritten
    ASSERT_EQ(run({"replay", "--input", input, "--models", "ridge,glm", "--out", part}).code, kExitOk);
    EXPECT_EQ(slurp(part), slurp(full));
}

TEST(Replay, ConstantInputIsRuntimeFailure) {
    fixtures::TempDir dir("flat");
    synth::SessionSpec spec;
    spec.sessions = 1;
    const auto path = dir.file("flat.csv").string();
    ingest::write_series_csv(path, synth::as_session_series(std::vector<double>(372, 100.0), spec));
    const auto r = run({"replay", "--input", path, "--out", dir.file("f.log").string()});
    EXPECT_EQ(r.code, kExitFailed);
    EXPECT_FALSE(r.err.empty());
}

TEST(Replay, ShortInputIsValidationError) {
    fixtures::TempDir dir("short");
    synth::SessionSpec spec;
    const auto path = dir.file("short.csv").string();
    ingest::write_series_csv(path, synth::as_session_series(synth::logistic_map(100, 0.3), spec));
    EXPECT_EQ(run({"replay", "--input", path, "--out", dir.file("s.log").string()}).code, kExitInvalid);
}

TEST(Pipeline, EvaluateAndReport) {
    fixtures::TempDir dir("pipeline");
    const auto input = write_sessions(dir, 2);
    const auto log = dir.file("run.log").string(), report = dir.file("run.json").string();
    ASSERT_EQ(run({"replay", "--input", input, "--out", log}).code, kExitOk);
    const auto ev = run({"evaluate", "--log", log, "--report", report});
    ASSERT_EQ(ev.code, kExitOk) << ev.err;
    ASSERT_TRUE(std::filesystem::exists(report));

    const auto table = run({"report", "--report", report});
    ASSERT_EQ(table.code, kExitOk) << table.err;
    EXPECT_NE(table.out.find("SMAPE (Combined)"), std::string::npos);
    EXPECT_NE(table.out.find("Directional Symmetry (Combined)"), std::string::npos);
    EXPECT_NE(table.out.find("Theil's U Coefficient (Combined)"), std::string::npos);
    EXPECT_NE(table.out.find("Model_1_Forecasts vs Model_2_Forecasts"), std::string::npos);
    EXPECT_NE(table.out.find("Random Forest vs Lasso"), std::string::npos);

    const auto days = run({"report", "--report", report, "--group", "day"});
    ASSERT_EQ(days.code, kExitOk);
    EXPECT_NE(days.out.find("SMAPE (Day-wise)"), std::string::npos);

    const auto structured = run({"report", "--report", report, "--format", "structured"});
    ASSERT_EQ(structured.code, kExitOk);
    EXPECT_EQ(structured.out.front(), '{');
}

TEST(Evaluate, MissingLogIsValidationError) {
    fixtures::TempDir dir("missing");
    const auto r = run({"evaluate", "--log", dir.file("missing.log").string(), "--report", dir.file("r.json").string()});
    EXPECT_EQ(r.code, kExitInvalid);
    EXPECT_NE(r.err.find("missing.log"), std::string::npos) << r.err;
    EXPECT_FALSE(std::filesystem::exists(dir.file("r.json")));
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, kExitInvalid);
    EXPECT_EQ(run({"frobnicate"}).code, kExitInvalid);
    EXPECT_EQ(run({"analyze", "--input", "x.csv", "--bogus"}).code, kExitInvalid);
    EXPECT_EQ(run({"replay", "--input", "x.csv"}).code, kExitInvalid);
    const auto help = run({"--help"});
    EXPECT_EQ(help.code, kExitOk);
    EXPECT_NE(help.out.find("replay"), std::string::npos);
}

TEST(Cli, RejectsInvalidValues) {
    fixtures::TempDir dir("values");
    const auto input = write_sessions(dir, 1);
    const auto out = dir.file("o.log").string();
    for (std::vector<std::string> extra : {std::vector<std::string>{"--window", "0"},
                                           {"--tolerance", "-0.1"},
                                           {"--models", "lasso,svm"},
                                           {"--interval", "soon"},
                                           {"--speedup", "0"},
                                           {"--retrain-mode", "sideways"},
                                           {"--session-open", "16:00"}}) {
        std::vector<std::string> args{"replay", "--input", input, "--out", out};
        args.insert(args.end(), extra.begin(), extra.end());
        EXPECT_EQ(run(args).code, kExitInvalid) << extra[0];
    }
}

TEST(Config, FileAndFlagsAgree) {
    fixtures::TempDir dir("config");
    const auto input = write_sessions(dir, 1);
    const auto cfg = dir.file("run.conf").string();
    std::ofstream(cfg) << "# desk settings\n"
                          "window = 250\n"
                          "interval = 1m\n"
                          "models = ridge,gbt\n"
                          "tolerance = 0.1\n"
                          "retrain-mode = symmetric\n"
                          "max-lag = 20\n"
                          "seed = 42\n"
                          "session-open = 10:00\n"
                          "utc-offset = +05:30\n"
                          "tuning = daily\n";
    const std::vector<std::string> base{"replay", "--input", input, "--out", "o.log"};
    auto with_file = base;
    with_file.insert(with_file.end(), {"--config", cfg});
    auto with_flags = base;
    with_flags.insert(with_flags.end(),
                      {"--window", "250", "--interval", "1m", "--models", "ridge,gbt", "--tolerance", "0.1",
                       "--retrain-mode", "symmetric", "--max-lag", "20", "--seed", "42", "--session-open", "10:00",
                       "--utc-offset", "+05:30", "--tuning", "daily"});
    const auto a = parse_run_config(with_file);
    const auto b = parse_run_config(with_flags);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.window, 250u);
    EXPECT_EQ(a.models, (std::vector<Family>{Family::ridge, Family::gbt}));
    EXPECT_EQ(a.hours.utc_offset, std::chrono::minutes{330});
    EXPECT_EQ(a.tuning, engine::TuningSchedule::daily);
}

TEST(Config, FlagsWinAndDefaultsFillTheRest) {
    fixtures::TempDir dir("precedence");
    const auto input = write_sessions(dir, 1);
    const auto cfg = dir.file("run.conf").string();
    std::ofstream(cfg) << "window = 250\nseed = 42\n";
    const auto c = parse_run_config({"replay", "--input", input, "--out", "o.log", "--config", cfg, "--seed", "9"});
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.window, 250u);
    EXPECT_EQ(c.tolerance, 0.05);
    EXPECT_EQ(c.max_dim, 12u);
}

TEST(Config, UnknownKeysAreRejected) {
    fixtures::TempDir dir("unknown");
    const auto input = write_sessions(dir, 1);
    ASSERT_NO_THROW(parse_run_config({"replay", "--input", input, "--out", "o.log"}));
    const auto cfg = dir.file("run.conf").string();
    std::ofstream(cfg) << "window = 250\nwindwo = 3\n";
    const std::vector<std::string> args{"replay", "--input", input, "--out", "o.log", "--config", cfg};
    EXPECT_THROW(parse_run_config(args), ConfigError);
    EXPECT_EQ(run(args).code, kExitInvalid);

    std::ofstream(cfg) << "[replay]\nwindow = 250\n";
    EXPECT_THROW(parse_run_config(args), ConfigError);
    EXPECT_THROW(parse_run_config({"replay", "--input", input, "--out", "o.log", "--config", "/nonexistent.conf"}),
                 ConfigError);
}

TEST(Config, EngineConfigMirrorsRunConfig) {
    fixtures::TempDir dir("engine");
    const auto input = write_sessions(dir, 1);
    const auto c = parse_run_config({"replay", "--input", input, "--out", "o.log", "--window", "280", "--stride",
                                     "2", "--split", "0.3", "--sequential"});
    const auto e = engine_config(c);
    EXPECT_EQ(e.window, 280u);
    EXPECT_EQ(e.stride, 2u);
    EXPECT_EQ(e.split_fraction, 0.3);
    EXPECT_FALSE(e.parallel);
    EXPECT_EQ(e.families.size(), 5u);
    EXPECT_EQ(e.policy.tolerance, 0.05);
}
