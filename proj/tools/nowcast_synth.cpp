// Writes synthetic price fixtures in the CSV input format.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nowcast/core/error.hpp"
#include "nowcast/ingest/csv.hpp"
#include "nowcast/synth/generators.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Synthetic price fixtures", "nowcast_synth"};
    std::string kind = "sessions";
    std::string out;
    nowcast::synth::SessionSpec spec;
    std::size_t points = 2000;
    std::string first_day = "2024-09-02";
    app.add_option("--kind", kind, "sessions (logistic-map bars), logistic, sine or noise")->capture_default_str();
    app.add_option("--out", out, "Output CSV")->required();
    app.add_option("--symbol", spec.symbol)->capture_default_str();
    app.add_option("--seed", spec.seed)->capture_default_str();
    app.add_option("--warm", spec.warm_points, "Bars before the first full session")->capture_default_str();
    app.add_option("--sessions", spec.sessions, "Full sessions")->capture_default_str();
    app.add_option("--bars", spec.bars_per_session, "Bars per session")->capture_default_str();
    app.add_option("--noise", spec.noise, "Gaussian price noise std dev")->capture_default_str();
    app.add_option("--points", points, "Length for logistic, sine and noise")->capture_default_str();
    app.add_option("--first-day", first_day, "First full session, YYYY-MM-DD")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    try {
        const auto day = std::chrono::floor<std::chrono::days>(nowcast::parse_rfc3339(first_day + "T00:00:00Z"));
        spec.first_day = day;
        nowcast::PriceSeries series;
        if (kind == "sessions") {
            series = nowcast::synth::chaotic_sessions(spec);
        } else {
            std::vector<double> values;
            if (kind == "logistic") {
                values = nowcast::synth::logistic_map(points, nowcast::synth::logistic_start(spec.seed));
                for (auto& v : values) v = spec.base + spec.scale * v;
            } else if (kind == "sine") {
                values = nowcast::synth::sine_wave(points, 0.1, spec.scale, spec.base);
            } else if (kind == "noise") {
                values = nowcast::synth::white_noise(points, spec.seed);
                for (auto& v : values) v = spec.base + v;
            } else {
                std::cerr << "error: unknown --kind " << kind << "\n";
                return 1;
            }
            spec.warm_points = 0;
            series = nowcast::synth::as_session_series(values, spec);
        }
        nowcast::ingest::write_series_csv(out, series);
        std::cout << "wrote " << series.size() << " points to " << out << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
