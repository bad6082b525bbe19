#include "dguard/deadline_policies.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dguard/errors.hpp"
#include "recorder.hpp"

namespace dguard {

namespace {

void check_regime(const DemandStream& stream, double start_x) {
    const EnvParams& env = stream.env();
    if (!(env.speed() >= 1.0)) {
        throw RegimeError("deadline policies require v >= 1, got v = " +
                          std::to_string(env.speed()));
    }
    if (!(start_x >= 0.0 && start_x <= env.width())) {
        throw ParameterError("start_x", "must lie in [0, W]");
    }
}

PathPlan plan_paths(PathSolver solver, const VehicleState& vehicle,
                    std::span<const Demand> demands, const EnvParams& env) {
    if (solver == PathSolver::fast_chain) {
        return longest_chain_fast(vehicle, demands, env.speed(), env.length());
    }
    return longest_path(build_reach_graph(vehicle, demands, env.speed(), env.length()));
}

// Intercept motion toward demand `id`, captured at its escape instant.
void intercept(detail::RunRecorder& rec, const Demand& d, const EnvParams& env) {
    const double capture_at = escape_time(d, env);
    rec.move_to(rec.clock(), {d.x, env.length()});
    rec.capture(d.id, capture_at);
}

// Index window over a stream sorted by arrival: [lo, hi) are the demands that
// have arrived and not yet reached the deadline at the current instant.
class Window {
public:
    explicit Window(const DemandStream& stream) : stream_(stream) {}

    // Advance to time t. Arrivals exactly at t are included iff `inclusive`;
    // demands whose escape instant is <= t are dropped.
    void advance(double t, bool inclusive) {
        const double transit = stream_.env().transit_time();
        while (hi_ < stream_.size() &&
               (stream_[hi_].t_arr < t || (inclusive && stream_[hi_].t_arr == t))) {
            ++hi_;
        }
        while (lo_ < hi_ && !(stream_[lo_].t_arr + transit > t)) {
            ++lo_;
        }
    }

    std::size_t lo() const { return lo_; }
    std::size_t hi() const { return hi_; }
    bool exhausted() const { return hi_ >= stream_.size(); }
    double next_arrival() const { return stream_[hi_].t_arr; }

private:
    const DemandStream& stream_;
    std::size_t lo_ = 0;
    std::size_t hi_ = 0;
};

}  // namespace

RunResult run_nclp(const DemandStream& stream, double start_x,
                   const DeadlinePolicyOptions& options) {
    check_regime(stream, start_x);
    const EnvParams& env = stream.env();
    detail::RunRecorder rec(stream, {start_x, env.length()}, options);

    rec.recompute(0.0);
    const VehicleState vehicle{start_x, env.length(), 0.0};
    const PathPlan plan = plan_paths(options.solver, vehicle, stream.demands(), env);
    for (std::size_t id : plan.order) {
        intercept(rec, stream[id], env);
    }
    return std::move(rec).finish();
}

RunResult run_lp(const DemandStream& stream, double start_x, double eta,
                 const DeadlinePolicyOptions& options) {
    check_regime(stream, start_x);
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw ParameterError("eta", "must lie in (0, 1]");
    }
    const EnvParams& env = stream.env();
    detail::RunRecorder rec(stream, {start_x, env.length()}, options);
    Window window(stream);

    double t = 0.0;
    bool woken = true;  // demands arriving at t = 0 are visible at the start
    std::vector<Demand> outstanding;
    while (true) {
        window.advance(t, woken);
        rec.recompute(t, woken && t > 0.0);

        outstanding.clear();
        for (std::size_t i = window.lo(); i < window.hi(); ++i) {
            if (!rec.is_captured(i)) {
                outstanding.push_back(stream[i]);
            }
        }
        const Point at = rec.position();
        const PathPlan plan = plan_paths(options.solver, {at.x, env.length(), t}, outstanding, env);

        if (plan.empty()) {
            if (window.exhausted()) {
                break;
            }
            t = std::max(t, window.next_arrival());
            woken = true;
            continue;
        }

        const auto len = static_cast<double>(plan.length());
        // Guard against eta * len landing a hair above an integer.
        auto serve = static_cast<std::size_t>(std::ceil(eta * len * (1.0 - 1e-12)));
        serve = std::clamp<std::size_t>(serve, 1, plan.length());
        for (std::size_t k = 0; k < serve; ++k) {
            intercept(rec, stream[plan.order[k]], env);
        }
        t = plan.capture_times[serve - 1];
        woken = false;
    }
    return std::move(rec).finish();
}

RunResult run_gp(const DemandStream& stream, double start_x, const RunOptions& options) {
    check_regime(stream, start_x);
    const EnvParams& env = stream.env();
    const double transit = env.transit_time();
    detail::RunRecorder rec(stream, {start_x, env.length()}, options);
    Window window(stream);

    double t = 0.0;
    bool woken = true;
    while (true) {
        window.advance(t, woken);
        rec.recompute(t, woken && t > 0.0);

        const VehicleState vehicle{rec.position().x, env.length(), t};
        // Escape order equals arrival order, so the first reachable demand in
        // the window is the one with the highest ordinate.
        std::size_t target = window.hi();
        for (std::size_t i = window.lo(); i < window.hi(); ++i) {
            if (!rec.is_captured(i) && source_edge(vehicle, stream[i], transit)) {
                target = i;
                break;
            }
        }
        if (target == window.hi()) {
            if (window.exhausted()) {
                break;
            }
            t = std::max(t, window.next_arrival());
            woken = true;
            continue;
        }
        intercept(rec, stream[target], env);
        t = escape_time(stream[target], env);
        woken = false;
    }
    return std::move(rec).finish();
}

}  // namespace dguard
