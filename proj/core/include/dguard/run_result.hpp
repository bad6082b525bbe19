#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "dguard/core.hpp"

namespace dguard {

enum class EventKind { escape, capture, recompute, arrival };

const char* to_string(EventKind kind) noexcept;

struct TraceEvent {
    double t = 0.0;
    EventKind kind = EventKind::arrival;
    std::optional<std::size_t> demand_id;
    double vehicle_x = 0.0;
    double vehicle_y = 0.0;
};

// Vehicle motion is piecewise linear between consecutive waypoints.
struct Waypoint {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

struct RunOptions {
    bool record_trace = false;
};

struct RunResult {
    std::size_t n_capt = 0;
    std::size_t n_esc = 0;
    double capture_fraction = 1.0;
    // Set for an empty stream, whose fraction is defined as 1.
    bool vacuous = false;

    // Final state of every demand, indexed by id.
    std::vector<Demand> outcomes;
    std::vector<std::size_t> capture_order;
    std::vector<Waypoint> trajectory;
    // Time-ordered; empty unless RunOptions::record_trace. At equal
    // timestamps: escapes, captures, recomputes, arrivals.
    std::vector<TraceEvent> trace;
};

// Vehicle position at time t, interpolated along the trajectory (clamped to
// its first and last waypoints).
Point position_at(const std::vector<Waypoint>& trajectory, double t);

// One JSON object per line: {"t","event","demand_id","vehicle_x","vehicle_y"};
// demand_id is null for recompute events.
void write_trace_jsonl(std::ostream& out, const std::vector<TraceEvent>& trace);

}  // namespace dguard
