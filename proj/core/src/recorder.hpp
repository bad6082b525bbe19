#pragma once

// Bookkeeping shared by every policy simulation: demand outcomes, vehicle
// trajectory and the optional event trace.

#include <vector>

#include "dguard/run_result.hpp"

namespace dguard::detail {

class RunRecorder {
public:
    RunRecorder(const DemandStream& stream, Point start, const RunOptions& options);

    bool is_captured(std::size_t id) const { return result_.outcomes[id].status == DemandStatus::captured; }

    // Straight unit-speed move ending at `to`, starting at time t from the
    // current vehicle position. Returns the arrival time.
    double move_to(double t, Point to);
    // Stay in place until time t.
    void wait_until(double t);
    void capture(std::size_t id, double t);
    // Recompute/decision marker. `after_arrival` places it behind an arrival
    // at the same instant (idle wake-ups).
    void recompute(double t, bool after_arrival = false);

    Point position() const { return {last_.x, last_.y}; }
    double clock() const { return last_.t; }

    // Remaining demands escape at their deadlines.
    RunResult finish() &&;

private:
    struct Pending {
        TraceEvent event;
        int rank;
        std::size_t seq;
    };
    void push_waypoint(const Waypoint& w);
    void add_event(double t, EventKind kind, std::optional<std::size_t> id, int rank);

    const DemandStream& stream_;
    RunOptions options_;
    RunResult result_;
    Waypoint last_;
    std::vector<Pending> events_;
};

}  // namespace dguard::detail
