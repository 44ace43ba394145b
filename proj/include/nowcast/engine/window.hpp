#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

#include "nowcast/chaos/chaos_params.hpp"
#include "nowcast/chaos/embedding.hpp"
#include "nowcast/core/forecast_record.hpp"
#include "nowcast/core/series.hpp"
#include "nowcast/engine/config.hpp"
#include "nowcast/models/trained_model.hpp"

namespace nowcast::engine {

struct BufferedPoint {
    Timestamp timestamp;
    double value = 0.0;
    bool gap_before = false;  ///< one or more interval slots were missed before this point
    bool operator==(const BufferedPoint&) const = default;
};

struct FamilySlot {
    Family family = Family::ridge;
    std::optional<models::TrainedModel> model;
    models::Hyperparameters tuned;  ///< last grid-search winner
    double validation_mse = 0.0;
    std::size_t retrain_count = 0;
    std::optional<ForecastRecord> open;
};

struct WindowState {
    std::size_t capacity = 300;
    std::deque<BufferedPoint> buffer;
    chaos::ChaosParams chaos;
    std::vector<FamilySlot> slots;  ///< one per enabled family, canonical order

    std::vector<double> values() const;
    bool full() const noexcept { return buffer.size() == capacity; }
    FamilySlot* slot(Family family);
    const FamilySlot* slot(Family family) const;
    bool has_open() const;
};

/// Empty slots for config.families, buffer loaded with the last `window` points.
WindowState make_window(const PriceSeries& warm, const EngineConfig& config);

/// Takens embedding of the buffer with the current chaos parameters.
chaos::DesignMatrix window_matrix(const WindowState& state, std::size_t stride);

/// Fits (tune = grid search, else refit slot.tuned) the listed slots.
/// Retrains run concurrently when config.parallel is set and all finish
/// before returning.
void train_slots(WindowState& state, const std::vector<FamilySlot*>& slots, const EngineConfig& config, bool tune);
void train_all(WindowState& state, const EngineConfig& config, bool tune);

/**
 * One open forecast per family from the buffer tail
 * (y_{t-(m-2)tau}, ..., y_t). Throws LengthError when the buffer is shorter
 * than (m-2)tau + 1, std::logic_error when a family has no fitted model.
 */
std::vector<ForecastRecord> forecast_step(WindowState& state);

struct IngestOutcome {
    std::vector<ForecastRecord> closed;  ///< canonical family order
    std::optional<GapEvent> gap;
};

/**
 * Closes the open forecasts with the tick, slides the buffer and retrains the
 * families whose squared error tripped the policy. A jump of more than one
 * interval inside a session marks a gap; the buffer is still appended.
 * Throws OrderingError when the tick is not after the buffer tail.
 */
IngestOutcome ingest_actual(WindowState& state, const Tick& tick, const EngineConfig& config);

}  // namespace nowcast::engine
