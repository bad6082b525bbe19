#pragma once

// Reachability between a deadline-bound vehicle and translating demands for
// the fast-demand regime (v >= 1), and longest capture paths.

#include <cstddef>
#include <span>
#include <vector>

#include "dguard/core.hpp"

namespace dguard {

// v |X - x| <= Y - y. Boundary points are reachable.
bool is_reachable(const Point& vehicle, const Point& demand, double speed) noexcept;

// j can be captured on the deadline after capturing i there:
// |x_i - x_j| <= t_j - t_i, i != j. Exactly coincident (t, x) pairs are
// ordered by id so the relation stays acyclic.
bool deadline_edge(const Demand& i, const Demand& j) noexcept;

// A vehicle parked at (X, L) at time t0 can still intercept d:
// t0 <= t_d + L/v and |X - x_d| <= t_d + L/v - t0.
bool source_edge(const VehicleState& vehicle, const Demand& d, double transit_time) noexcept;

// Capture-precedence DAG rooted at the vehicle. Vertices are referred to by
// their index into `vertices`; edges are adjacency lists over those indices.
struct ReachGraph {
    VehicleState source;
    double transit_time = 0.0;  // L / v
    std::vector<Demand> vertices;
    std::vector<std::size_t> source_edges;
    std::vector<std::vector<std::size_t>> adjacency;
    std::vector<std::size_t> topo_order;  // by (t_arr, id)

    std::size_t edge_count() const noexcept;
};

struct PathPlan {
    std::vector<std::size_t> order;    // demand ids, capture order
    std::vector<double> capture_times;  // t_arr + L/v of each

    std::size_t length() const noexcept { return order.size(); }
    bool empty() const noexcept { return order.empty(); }
};

// O(n^2) construction. Requires v >= 1, vehicle.y == L and no escaped demand
// (escape time <= vehicle.t) in `demands`.
ReachGraph build_reach_graph(const VehicleState& vehicle, std::span<const Demand> demands,
                             double speed, double length);

// Maximum-cardinality path from the source. Topologically sorts the graph
// (throws CycleError if that fails) and runs the DP in O(|V| + |E|).
// Predecessor ties go to the smallest id (the source before any demand); the
// end vertex is the smallest id among those of maximum depth.
PathPlan longest_path(const ReachGraph& graph);

// Same length as longest_path(build_reach_graph(...)) in O(n log n): a
// deadline edge is coordinate-wise dominance in (t - x, t + x), so the answer
// is a longest non-decreasing chain among the demands the source reaches.
PathPlan longest_chain_fast(const VehicleState& vehicle, std::span<const Demand> demands,
                            double speed, double length);

}  // namespace dguard
