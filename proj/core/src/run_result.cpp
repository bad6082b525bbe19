#include "dguard/run_result.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

#include "recorder.hpp"

namespace dguard {

const char* to_string(EventKind kind) noexcept {
    switch (kind) {
        case EventKind::escape: return "escape";
        case EventKind::capture: return "capture";
        case EventKind::recompute: return "recompute";
        case EventKind::arrival: return "arrival";
    }
    return "unknown";
}

Point position_at(const std::vector<Waypoint>& trajectory, double t) {
    if (trajectory.empty()) {
        return {};
    }
    if (t <= trajectory.front().t) {
        return {trajectory.front().x, trajectory.front().y};
    }
    // First waypoint strictly after t.
    auto it = std::upper_bound(trajectory.begin(), trajectory.end(), t,
                               [](double time, const Waypoint& w) { return time < w.t; });
    if (it == trajectory.end()) {
        return {trajectory.back().x, trajectory.back().y};
    }
    const Waypoint& b = *it;
    const Waypoint& a = *std::prev(it);
    const double span = b.t - a.t;
    const double s = span > 0.0 ? (t - a.t) / span : 1.0;
    return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
}

void write_trace_jsonl(std::ostream& out, const std::vector<TraceEvent>& trace) {
    for (const TraceEvent& e : trace) {
        nlohmann::json rec = {
            {"t", e.t},
            {"event", to_string(e.kind)},
            {"demand_id", e.demand_id ? nlohmann::json(*e.demand_id) : nlohmann::json(nullptr)},
            {"vehicle_x", e.vehicle_x},
            {"vehicle_y", e.vehicle_y},
        };
        out << rec.dump() << '\n';
    }
}

namespace detail {

namespace {
constexpr int kRankEscape = 0;
constexpr int kRankCapture = 1;
constexpr int kRankRecompute = 2;
constexpr int kRankArrival = 3;
constexpr int kRankWakeup = 4;
}  // namespace

RunRecorder::RunRecorder(const DemandStream& stream, Point start, const RunOptions& options)
    : stream_(stream), options_(options), last_{0.0, start.x, start.y} {
    result_.outcomes.assign(stream.demands().begin(), stream.demands().end());
    for (Demand& d : result_.outcomes) {
        d.status = DemandStatus::outstanding;
    }
    result_.trajectory.push_back(last_);
}

void RunRecorder::push_waypoint(const Waypoint& w) {
    if (w.t == last_.t && w.x == last_.x && w.y == last_.y) {
        return;
    }
    result_.trajectory.push_back(w);
    last_ = w;
}

double RunRecorder::move_to(double t, Point to) {
    wait_until(t);
    const double d = distance({last_.x, last_.y}, to);
    push_waypoint({last_.t + d, to.x, to.y});
    return last_.t;
}

void RunRecorder::wait_until(double t) {
    if (t > last_.t) {
        push_waypoint({t, last_.x, last_.y});
    }
}

void RunRecorder::capture(std::size_t id, double t) {
    wait_until(t);
    Demand& d = result_.outcomes[id];
    d.status = DemandStatus::captured;
    d.resolve_time = t;
    result_.capture_order.push_back(id);
    add_event(t, EventKind::capture, id, kRankCapture);
}

void RunRecorder::recompute(double t, bool after_arrival) {
    add_event(t, EventKind::recompute, std::nullopt, after_arrival ? kRankWakeup : kRankRecompute);
}

void RunRecorder::add_event(double t, EventKind kind, std::optional<std::size_t> id, int rank) {
    if (!options_.record_trace) {
        return;
    }
    events_.push_back({TraceEvent{t, kind, id, 0.0, 0.0}, rank, events_.size()});
}

RunResult RunRecorder::finish() && {
    const double transit = stream_.env().transit_time();
    for (Demand& d : result_.outcomes) {
        if (d.status == DemandStatus::captured) {
            ++result_.n_capt;
            continue;
        }
        d.status = DemandStatus::escaped;
        d.resolve_time = d.t_arr + transit;
        ++result_.n_esc;
        add_event(d.resolve_time, EventKind::escape, d.id, kRankEscape);
    }
    for (const Demand& d : result_.outcomes) {
        add_event(d.t_arr, EventKind::arrival, d.id, kRankArrival);
    }
    const std::size_t total = result_.n_capt + result_.n_esc;
    result_.vacuous = total == 0;
    result_.capture_fraction =
        total == 0 ? 1.0 : static_cast<double>(result_.n_capt) / static_cast<double>(total);

    if (options_.record_trace) {
        std::stable_sort(events_.begin(), events_.end(), [](const Pending& a, const Pending& b) {
            if (a.event.t != b.event.t) return a.event.t < b.event.t;
            if (a.rank != b.rank) return a.rank < b.rank;
            const auto ida = a.event.demand_id.value_or(0);
            const auto idb = b.event.demand_id.value_or(0);
            if (ida != idb) return ida < idb;
            return a.seq < b.seq;
        });
        result_.trace.reserve(events_.size());
        for (Pending& p : events_) {
            const Point at = position_at(result_.trajectory, p.event.t);
            p.event.vehicle_x = at.x;
            p.event.vehicle_y = at.y;
            result_.trace.push_back(p.event);
        }
    }
    return std::move(result_);
}

}  // namespace detail
}  // namespace dguard
