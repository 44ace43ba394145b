#include "nowcast/engine/window.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>

#include <fmt/format.h>

#include "nowcast/core/error.hpp"
#include "nowcast/models/hyperparameters.hpp"

namespace nowcast::engine {

std::uint64_t family_seed(std::uint64_t master, Family family) {
    // splitmix64 finaliser
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(family) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<double> WindowState::values() const {
    std::vector<double> out;
    out.reserve(buffer.size());
    for (const auto& p : buffer) out.push_back(p.value);
    return out;
}

FamilySlot* WindowState::slot(Family family) {
    for (auto& s : slots)
        if (s.family == family) return &s;
    return nullptr;
}

const FamilySlot* WindowState::slot(Family family) const {
    for (const auto& s : slots)
        if (s.family == family) return &s;
    return nullptr;
}

bool WindowState::has_open() const {
    return std::any_of(slots.begin(), slots.end(), [](const FamilySlot& s) { return s.open.has_value(); });
}

WindowState make_window(const PriceSeries& warm, const EngineConfig& config) {
    if (config.window < 4) throw std::invalid_argument("window must hold at least 4 points");
    if (warm.size() < config.window) {
        throw LengthError(fmt::format("warm-up needs {} points, history has {}", config.window, warm.size()));
    }
    WindowState state;
    state.capacity = config.window;
    for (std::size_t i = warm.size() - config.window; i < warm.size(); ++i) {
        state.buffer.push_back({warm[i].timestamp, warm[i].close, false});
    }
    for (Family f : config.families) {
        FamilySlot s;
        s.family = f;
        s.tuned.family = f;
        s.tuned.seed = family_seed(config.seed, f);
        state.slots.push_back(std::move(s));
    }
    return state;
}

chaos::DesignMatrix window_matrix(const WindowState& state, std::size_t stride) {
    const auto values = state.values();
    return chaos::takens_embed(values, state.chaos.lag, state.chaos.embedding_dim, stride);
}

namespace {

void train_one(FamilySlot& slot, const chaos::DesignMatrix& matrix, const EngineConfig& config, bool tune) {
    if (tune) {
        models::Hyperparameters base;
        base.family = slot.family;
        base.seed = family_seed(config.seed, slot.family);
        if (slot.family == Family::gbt) base.num_trees = models::kDefaultGbtIterations;
        const auto candidates = models::expand_grid(models::default_grid(slot.family), base);
        auto result = models::grid_search(matrix, candidates, config.fit, config.split_fraction);
        slot.tuned = result.model.params();
        slot.validation_mse = result.validation_mse;
        slot.model = std::move(result.model);
    } else {
        slot.model = models::fit(matrix, slot.tuned, config.fit);
    }
}

}  // namespace

void train_slots(WindowState& state, const std::vector<FamilySlot*>& slots, const EngineConfig& config, bool tune) {
    if (slots.empty()) return;
    const auto matrix = window_matrix(state, config.stride);
    if (!config.parallel || slots.size() == 1) {
        for (auto* s : slots) train_one(*s, matrix, config, tune);
        return;
    }
    std::vector<std::future<void>> jobs;
    jobs.reserve(slots.size());
    for (auto* s : slots) {
        jobs.push_back(std::async(std::launch::async, [&, s] { train_one(*s, matrix, config, tune); }));
    }
    std::exception_ptr first;
    for (auto& j : jobs) {
        try {
            j.get();
        } catch (...) {
            if (!first) first = std::current_exception();
        }
    }
    if (first) std::rethrow_exception(first);
}

void train_all(WindowState& state, const EngineConfig& config, bool tune) {
    std::vector<FamilySlot*> all;
    for (auto& s : state.slots) all.push_back(&s);
    train_slots(state, all, config, tune);
}

std::vector<ForecastRecord> forecast_step(WindowState& state) {
    const std::size_t m = state.chaos.embedding_dim;
    const std::size_t tau = state.chaos.lag;
    const std::size_t needed = (m - 2) * tau + 1;
    if (state.buffer.size() < needed) {
        throw LengthError(fmt::format("forecast needs {} buffered points, have {}", needed, state.buffer.size()));
    }
    const auto values = state.values();
    const auto x = chaos::forecast_features(values, tau, m);

    std::vector<ForecastRecord> out;
    for (auto& s : state.slots) {
        if (!s.model) throw std::logic_error(fmt::format("no fitted {} model", family_key(s.family)));
        ForecastRecord r;
        r.timestamp = state.buffer.back().timestamp;
        r.family = s.family;
        r.forecast = s.model->predict(x);
        r.train_mse = s.model->train_mse();
        r.window_start = state.buffer.front().timestamp;
        s.open = r;
        out.push_back(r);
    }
    return out;
}

IngestOutcome ingest_actual(WindowState& state, const Tick& tick, const EngineConfig& config) {
    if (!state.buffer.empty() && tick.timestamp <= state.buffer.back().timestamp) {
        throw OrderingError(fmt::format("tick at {} is not after buffer tail {}", format_rfc3339(tick.timestamp),
                                        format_rfc3339(state.buffer.back().timestamp)));
    }
    validate_price(tick.close, "tick");

    IngestOutcome out;
    BufferedPoint point{tick.timestamp, tick.close, false};
    if (!state.buffer.empty()) {
        const auto prev = state.buffer.back().timestamp;
        const auto delta = tick.timestamp - prev;
        const bool same_session = config.hours.local_date(prev) == config.hours.local_date(tick.timestamp);
        if (same_session && delta > config.interval) {
            point.gap_before = true;
            const auto slots = static_cast<std::size_t>(delta / config.interval);
            out.gap = GapEvent{prev + config.interval, tick.timestamp, slots - (delta % config.interval == Seconds{0}),
                               "missing ticks"};
            if (out.gap->missed_slots == 0) out.gap->missed_slots = 1;
        }
    }

    std::vector<FamilySlot*> retrain;
    for (auto& s : state.slots) {
        if (!s.open) continue;
        ForecastRecord r = *s.open;
        s.open.reset();
        r.close(tick.timestamp, tick.close);
        r.retrained = should_retrain(r.squared_error, r.train_mse, config.policy);
        if (r.retrained) retrain.push_back(&s);
        out.closed.push_back(r);
    }

    if (state.buffer.size() == state.capacity) state.buffer.pop_front();
    state.buffer.push_back(point);

    train_slots(state, retrain, config, config.tuning == TuningSchedule::every_retrain);
    for (auto* s : retrain) ++s->retrain_count;
    return out;
}

}  // namespace nowcast::engine
