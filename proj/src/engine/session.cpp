#include "nowcast/engine/session.hpp"

#include <thread>

#include "nowcast/core/channel.hpp"

namespace nowcast::engine {

namespace {

std::string describe(const std::exception_ptr& e) {
    try {
        std::rethrow_exception(e);
    } catch (const std::exception& ex) {
        return ex.what();
    } catch (...) {
        return "unknown failure";
    }
}

}  // namespace

SessionSummary run_session(TickSource& source, Nowcaster& engine, const RecordSink& sink,
                           const SessionOptions& options) {
    SessionSummary summary;
    BoundedChannel<Tick> channel(options.channel_capacity);

    std::thread producer([&] {
        try {
            while (auto tick = source.next()) {
                if (options.stop_at && tick->timestamp > *options.stop_at) break;
                if (!channel.push(std::move(*tick))) return;
            }
            channel.close();
        } catch (...) {
            channel.close(std::current_exception());
        }
    });

    try {
        while (auto tick = channel.pop()) {
            auto step = engine.process(*tick);
            if (step.skipped) {
                ++summary.ticks_skipped;
                continue;
            }
            ++summary.ticks_processed;
            if (step.recalibrated) ++summary.recalibrations;
            if (step.gap) summary.gaps.push_back(*step.gap);
            summary.last_tick = tick->timestamp;
            if (!step.closed.empty()) {
                sink(step.closed);
                summary.records += step.closed.size();
            }
        }
    } catch (...) {
        summary.failure = std::current_exception();
        summary.failure_message = describe(summary.failure);
        source.cancel();
        channel.close();
    }
    producer.join();

    for (const auto& g : source.gaps()) summary.gaps.push_back(g);
    return summary;
}

}  // namespace nowcast::engine
