#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "nowcast/chaos/embedding.hpp"
#include "nowcast/core/error.hpp"
#include "nowcast/engine/calibration.hpp"
#include "nowcast/engine/nowcaster.hpp"
#include "nowcast/engine/retrain.hpp"
#include "nowcast/engine/session.hpp"
#include "nowcast/engine/window.hpp"
#include "nowcast/synth/generators.hpp"
#include "support/fixtures.hpp"

using namespace nowcast;
using namespace nowcast::engine;
using namespace std::chrono;

namespace {

class VectorSource : public TickSource {
public:
    explicit VectorSource(std::vector<Tick> ticks, std::optional<std::size_t> fail_after = std::nullopt)
        : ticks_(std::move(ticks)), fail_after_(fail_after) {}

    std::optional<Tick> next() override {
        if (fail_after_ && index_ == *fail_after_) throw IoError("feed dropped");
        if (index_ == ticks_.size()) return std::nullopt;
        return ticks_[index_++];
    }

private:
    std::vector<Tick> ticks_;
    std::optional<std::size_t> fail_after_;
    std::size_t index_ = 0;
};

std::vector<Tick> to_ticks(const PriceSeries& s) {
    std::vector<Tick> out;
    for (const auto& p : s.points()) out.push_back({p.timestamp, s.symbol(), p.close});
    return out;
}

struct Desk {
    PriceSeries warm;
    PriceSeries live;
};

Desk desk(std::size_t sessions, std::uint64_t seed = 7) {
    synth::SessionSpec spec;
    spec.sessions = sessions;
    spec.seed = seed;
    const auto all = synth::chaotic_sessions(spec);
    return {all.slice(0, spec.warm_points), all.slice(spec.warm_points, all.size())};
}

models::LinearModel linear_body(std::vector<double> coefficients, double intercept) {
    models::LinearModel lm;
    lm.coefficients = std::move(coefficients);
    lm.intercept = intercept;
    return lm;
}

models::TrainedModel constant_model(Family f, std::size_t features, double c, double mse) {
    models::Hyperparameters p;
    p.family = f;
    return models::TrainedModel(p, features, linear_body(std::vector<double>(features, 0.0), c), mse);
}

/// Window over 300 noisy points with every family holding a constant model.
WindowState constant_window(const EngineConfig& config, double c, double mse) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> e(0.0, 1.0);
    std::vector<double> v(config.window);
    for (auto& x : v) x = 50.0 + e(rng);
    auto state = make_window(fixtures::series_from(v), config);
    state.chaos.lag = 1;
    state.chaos.embedding_dim = 5;
    for (auto& s : state.slots) s.model = constant_model(s.family, 4, c, mse);
    return state;
}

std::vector<ForecastRecord> run(const Desk& d, EngineConfig config, SessionSummary* summary = nullptr) {
    Nowcaster engine(std::move(config), d.warm);
    VectorSource source(to_ticks(d.live));
    std::vector<ForecastRecord> log;
    auto s = run_session(source, engine, [&](std::span<const ForecastRecord> r) {
        log.insert(log.end(), r.begin(), r.end());
    });
    if (summary) *summary = s;
    return log;
}

}  // namespace

TEST(Retrain, TruthTable) {
    const RetrainPolicy exceed{0.05, RetrainMode::exceed};
    const RetrainPolicy symmetric{0.05, RetrainMode::symmetric};
    EXPECT_TRUE(should_retrain(4.3, 4.0, exceed));
    EXPECT_FALSE(should_retrain(4.1, 4.0, exceed));
    EXPECT_FALSE(should_retrain(4.2, 4.0, exceed));
    EXPECT_FALSE(should_retrain(4.0, 4.0, exceed));
    EXPECT_FALSE(should_retrain(4.0, 4.0, symmetric));
    EXPECT_FALSE(should_retrain(3.0, 4.0, exceed));
    EXPECT_TRUE(should_retrain(3.0, 4.0, symmetric));
    EXPECT_TRUE(should_retrain(4.3, 4.0, symmetric));
}

TEST(Retrain, ZeroTrainingErrorAndBadInputs) {
    const RetrainPolicy p;
    EXPECT_FALSE(should_retrain(0.0, 0.0, p));
    EXPECT_TRUE(should_retrain(1e-300, 0.0, p));
    EXPECT_THROW(should_retrain(1.0, -1.0, p), std::invalid_argument);
    EXPECT_THROW(should_retrain(1.0, 1.0, RetrainPolicy{0.0}), std::invalid_argument);
}

TEST(Retrain, MonotoneInSquaredError) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double mse = u(rng);
        const RetrainPolicy p{0.01 + u(rng) / 20.0};
        bool fired = false;
        for (double se = 0.0; se < 25.0; se += 0.05) {
            const bool now = should_retrain(se, mse, p);
            EXPECT_TRUE(now || !fired) << "mse " << mse << " se " << se;
            fired = now;
        }
    }
}

TEST(ForecastStep, UsesBufferTailAtLagSpacing) {
    EngineConfig config;
    config.families = {Family::ridge};
    std::vector<double> v(300);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i + 1);
    auto state = make_window(fixtures::series_from(v), config);
    state.chaos.lag = 1;
    state.chaos.embedding_dim = 5;
    // forecast = y_297 + 10 y_298 + 100 y_299 + 1000 y_300 identifies the feature order
    models::Hyperparameters p;
    state.slots[0].model = models::TrainedModel(p, 4, linear_body({1.0, 10.0, 100.0, 1000.0}, 0.0), 1.0);
    const auto r = forecast_step(state);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_DOUBLE_EQ(r[0].forecast, 297.0 + 2980.0 + 29900.0 + 300000.0);
    EXPECT_EQ(r[0].timestamp, state.buffer.back().timestamp);
    EXPECT_EQ(r[0].window_start, state.buffer.front().timestamp);
    EXPECT_FALSE(r[0].closed());

    state.chaos.lag = 3;
    state.slots[0].model = models::TrainedModel(p, 4, linear_body({1.0, 10.0, 100.0, 1000.0}, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(forecast_step(state)[0].forecast, 291.0 + 2940.0 + 29700.0 + 300000.0);

    state.chaos.embedding_dim = 2;
    state.slots[0].model = models::TrainedModel(p, 1, linear_body({2.0}, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(forecast_step(state)[0].forecast, 600.0);
}

TEST(ForecastStep, MatchesLastEmbeddingRow) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(1.0, 2.0);
    std::uniform_int_distribution<std::size_t> lag(1, 6), dim(2, 8);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(300);
        for (auto& x : v) x = u(rng);
        const std::size_t tau = lag(rng), m = dim(rng);
        // the row whose features end at y_t targets y_{t+tau}
        auto extended = v;
        extended.insert(extended.end(), tau, 1.5);
        const auto matrix = chaos::takens_embed(extended, tau, m);
        const auto last = matrix.features(matrix.rows() - 1);
        const auto x = chaos::forecast_features(v, tau, m);
        ASSERT_EQ(x.size(), m - 1);
        EXPECT_TRUE(std::equal(x.begin(), x.end(), last.begin(), last.end()));
    }
}

TEST(ForecastStep, ConstantRidgeIgnoresBuffer) {
    EngineConfig config;
    auto state = constant_window(config, 42.5, 1.0);
    for (const auto& r : forecast_step(state)) EXPECT_EQ(r.forecast, 42.5);
}

TEST(ForecastStep, ShortBufferAndMissingModel) {
    EngineConfig config;
    config.window = 10;
    config.families = {Family::ridge};
    auto state = make_window(fixtures::series_from({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), config);
    state.chaos.lag = 4;
    state.chaos.embedding_dim = 5;
    EXPECT_THROW(forecast_step(state), LengthError);
    state.chaos.lag = 1;
    EXPECT_THROW(forecast_step(state), std::logic_error);
}

TEST(Ingest, PerfectForecastRetrainsNothingAndSlides) {
    EngineConfig config;
    auto state = constant_window(config, 50.0, 1.0);
    const auto front = state.buffer[1].timestamp;
    forecast_step(state);
    const Tick tick{state.buffer.back().timestamp + minutes{5}, "TEST", 50.0};
    const auto out = ingest_actual(state, tick, config);
    ASSERT_EQ(out.closed.size(), 5u);
    for (const auto& r : out.closed) {
        EXPECT_EQ(r.squared_error, 0.0);
        EXPECT_FALSE(r.retrained);
    }
    for (const auto& s : state.slots) EXPECT_EQ(s.retrain_count, 0u);
    EXPECT_EQ(state.buffer.size(), 300u);
    EXPECT_EQ(state.buffer.front().timestamp, front);
    EXPECT_EQ(state.buffer.back().value, 50.0);
    EXPECT_FALSE(state.has_open());
}

TEST(Ingest, LargeMissRetrainsEveryFamily) {
    EngineConfig config;
    auto state = constant_window(config, 50.0, 1.0);
    forecast_step(state);
    // 10 x RMSE off the forecast
    const Tick tick{state.buffer.back().timestamp + minutes{5}, "TEST", 60.0};
    const auto out = ingest_actual(state, tick, config);
    ASSERT_EQ(out.closed.size(), 5u);
    for (const auto& r : out.closed) {
        EXPECT_DOUBLE_EQ(r.squared_error, 100.0);
        EXPECT_TRUE(r.retrained);
        EXPECT_EQ(r.train_mse, 1.0);
    }
    for (const auto& s : state.slots) {
        EXPECT_EQ(s.retrain_count, 1u);
        ASSERT_TRUE(s.model);
        EXPECT_EQ(s.model->family(), s.family);
        EXPECT_NE(s.model->train_mse(), 1.0);
    }
    EXPECT_EQ(state.buffer.size(), 300u);
}

TEST(Ingest, OrderingAndGaps) {
    EngineConfig config;
    auto state = constant_window(config, 50.0, 1.0);
    const auto tail = state.buffer.back().timestamp;
    EXPECT_THROW(ingest_actual(state, {tail, "TEST", 50.0}, config), OrderingError);
    EXPECT_THROW(ingest_actual(state, {tail - minutes{5}, "TEST", 50.0}, config), OrderingError);

    const auto out = ingest_actual(state, {tail + minutes{20}, "TEST", 50.0}, config);
    ASSERT_TRUE(out.gap);
    EXPECT_EQ(out.gap->missed_slots, 3u);
    EXPECT_EQ(out.gap->expected, tail + minutes{5});
    EXPECT_EQ(out.gap->resumed, tail + minutes{20});
    EXPECT_TRUE(state.buffer.back().gap_before);
    EXPECT_EQ(state.buffer.size(), 300u);

    const auto next = ingest_actual(state, {tail + minutes{25}, "TEST", 50.0}, config);
    EXPECT_FALSE(next.gap);
    EXPECT_FALSE(state.buffer.back().gap_before);
}

TEST(Ingest, OvernightJumpIsNotAGap) {
    EngineConfig config;
    auto state = constant_window(config, 50.0, 1.0);
    const auto tail = state.buffer.back().timestamp;
    const auto out = ingest_actual(state, {tail + hours{20}, "TEST", 50.0}, config);
    EXPECT_FALSE(out.gap);
}

TEST(Calibration, LogisticHistoryIsChaotic) {
    const auto d = desk(1);
    CalibrationConfig c;
    const auto history = trailing_sessions(d.warm, 4, 300, c.hours);
    EXPECT_GE(history.size(), 288u);
    const auto cal = calibrate_day(d.warm, c);
    EXPECT_TRUE(cal.params.chaotic);
    EXPECT_GT(cal.params.lyapunov, 0.0);
    EXPECT_GE(cal.params.embedding_dim, 2u);
    EXPECT_EQ(calibrate_day(d.warm, c).params, cal.params);
}

TEST(Calibration, ConstantHistoryNamesTheSession) {
    const auto d = desk(1);
    std::vector<PricePoint> flat;
    for (const auto& p : d.warm.points()) flat.push_back({p.timestamp, 100.0});
    const PriceSeries history("FLAT", flat);
    try {
        calibrate_day(history, {});
        FAIL() << "expected DegeneracyError";
    } catch (const DegeneracyError& e) {
        EXPECT_NE(std::string(e.what()).find(format_date(CalibrationConfig{}.hours.local_date(flat.back().timestamp))),
                  std::string::npos)
            << e.what();
    }
}

TEST(Calibration, ShortHistoryIsLengthError) {
    const auto d = desk(1);
    EXPECT_THROW(calibrate_day(d.warm.slice(0, 100), {}), LengthError);
}

TEST(Calibration, TrailingSessionsExtendsToMinimum) {
    const auto d = desk(1);
    const SessionHours hours;
    const auto four = trailing_sessions(d.warm, 4, 0, hours);
    EXPECT_EQ(four.size(), 288u);
    const auto extended = trailing_sessions(d.warm, 4, 300, hours);
    EXPECT_EQ(extended.size(), 300u);
    EXPECT_EQ(extended.points().back(), d.warm.points().back());
}

TEST(Nowcaster, RequiresFullWarmWindow) {
    const auto d = desk(1);
    EXPECT_THROW(Nowcaster(EngineConfig{}, d.warm.slice(0, 299)), LengthError);
}

TEST(Session, SeventyTwoTicksGiveThreeHundredSixtyRecords) {
    const auto d = desk(1);
    ASSERT_EQ(d.live.size(), 72u);
    SessionSummary summary;
    EngineConfig config;
    Nowcaster engine(config, d.warm);
    VectorSource source(to_ticks(d.live));
    std::vector<ForecastRecord> log;
    std::size_t checks = 0;
    summary = run_session(source, engine, [&](std::span<const ForecastRecord> r) {
        EXPECT_EQ(engine.state().buffer.size(), 300u);
        ++checks;
        log.insert(log.end(), r.begin(), r.end());
    });
    EXPECT_TRUE(summary.ok()) << summary.failure_message;
    EXPECT_EQ(checks, 72u);
    EXPECT_EQ(summary.ticks_processed, 72u);
    EXPECT_EQ(summary.records, 360u);
    EXPECT_EQ(summary.recalibrations, 1u);
    ASSERT_EQ(log.size(), 360u);
    for (std::size_t i = 0; i < log.size(); ++i) {
        const auto& r = log[i];
        EXPECT_TRUE(r.closed());
        EXPECT_EQ(r.family, kAllFamilies[i % 5]);
        EXPECT_EQ(r.timestamp, d.live[i / 5].timestamp);
        EXPECT_EQ(*r.actual, d.live[i / 5].close);
        EXPECT_EQ(r.squared_error, (r.forecast - *r.actual) * (r.forecast - *r.actual));
        EXPECT_EQ(r.retrained, should_retrain(r.squared_error, r.train_mse, config.policy));
    }
}

TEST(Session, RecordsStrictlyOrderedPerFamilyAcrossSessions) {
    const auto d = desk(2);
    EngineConfig config;
    config.families = {Family::ridge, Family::glm};
    SessionSummary summary;
    const auto log = run(d, config, &summary);
    EXPECT_EQ(summary.recalibrations, 2u);
    EXPECT_EQ(log.size(), 2u * 144u);
    for (Family f : config.families) {
        std::optional<Timestamp> prev;
        for (const auto& r : log) {
            if (r.family != f) continue;
            if (prev) {
                EXPECT_GT(r.timestamp, *prev);
            }
            prev = r.timestamp;
        }
    }
}

TEST(Session, DeterministicAcrossRunsAndThreading) {
    const auto d = desk(1, 21);
    EngineConfig config;
    config.seed = 99;
    const auto a = run(d, config);
    const auto b = run(d, config);
    config.parallel = false;
    const auto c = run(d, config);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
}

TEST(Session, EmptyStreamIsClean) {
    const auto d = desk(1);
    Nowcaster engine(EngineConfig{}, d.warm);
    VectorSource source({});
    std::size_t calls = 0;
    const auto s = run_session(source, engine, [&](std::span<const ForecastRecord>) { ++calls; });
    EXPECT_TRUE(s.ok());
    EXPECT_EQ(s.records, 0u);
    EXPECT_EQ(calls, 0u);
}

TEST(Session, SourceFailureHaltsAfterFlushing) {
    const auto d = desk(1);
    EngineConfig config;
    config.families = {Family::ridge};
    Nowcaster engine(config, d.warm);
    VectorSource source(to_ticks(d.live), 30);
    std::vector<ForecastRecord> log;
    const auto s = run_session(source, engine, [&](std::span<const ForecastRecord> r) {
        log.insert(log.end(), r.begin(), r.end());
    });
    EXPECT_FALSE(s.ok());
    EXPECT_NE(s.failure_message.find("feed dropped"), std::string::npos);
    EXPECT_EQ(s.ticks_processed, 30u);
    ASSERT_EQ(log.size(), 30u);
    EXPECT_EQ(log.back().timestamp, d.live[29].timestamp);
    ASSERT_TRUE(s.last_tick);
    EXPECT_EQ(*s.last_tick, d.live[29].timestamp);
}

TEST(Session, OutOfHoursTicksAreSkipped) {
    const auto d = desk(1);
    auto ticks = to_ticks(d.live);
    ticks.push_back({ticks.back().timestamp + hours{2}, "SYNTH", 105.0});
    EngineConfig config;
    config.families = {Family::ridge};
    Nowcaster engine(config, d.warm);
    VectorSource source(ticks);
    const auto s = run_session(source, engine, [](std::span<const ForecastRecord>) {});
    EXPECT_EQ(s.ticks_processed, 72u);
    EXPECT_EQ(s.ticks_skipped, 1u);
    EXPECT_EQ(s.records, 72u);
}

TEST(Session, StopAtEndsTheSession) {
    const auto d = desk(1);
    EngineConfig config;
    config.families = {Family::ridge};
    Nowcaster engine(config, d.warm);
    VectorSource source(to_ticks(d.live));
    SessionOptions o;
    o.stop_at = d.live[9].timestamp;
    const auto s = run_session(source, engine, [](std::span<const ForecastRecord>) {}, o);
    EXPECT_TRUE(s.ok());
    EXPECT_EQ(s.ticks_processed, 10u);
}

TEST(Config, FamilySeedsAreIndependent) {
    std::set<std::uint64_t> seen;
    for (Family f : kAllFamilies) seen.insert(family_seed(7, f));
    EXPECT_EQ(seen.size(), 5u);
    EXPECT_NE(family_seed(7, Family::random_forest), family_seed(8, Family::random_forest));
    EXPECT_EQ(family_seed(7, Family::gbt), family_seed(7, Family::gbt));
}
