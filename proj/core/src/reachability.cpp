#include "dguard/reachability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dguard/errors.hpp"

namespace dguard {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

void check_preconditions(const VehicleState& vehicle, std::span<const Demand> demands,
                         double speed, double length) {
    if (!(speed >= 1.0)) {
        throw RegimeError("reachability graphs require v >= 1, got v = " + std::to_string(speed));
    }
    if (vehicle.y != length) {
        throw ContractError("vehicle must be on the deadline (y = L)");
    }
    const double transit = length / speed;
    for (const Demand& d : demands) {
        if (!(d.t_arr + transit > vehicle.t)) {
            throw ContractError("demand " + std::to_string(d.id) + " has already escaped at t = " +
                                std::to_string(vehicle.t));
        }
    }
}

PathPlan make_plan(std::span<const Demand> chain, double transit) {
    PathPlan plan;
    plan.order.reserve(chain.size());
    plan.capture_times.reserve(chain.size());
    for (const Demand& d : chain) {
        plan.order.push_back(d.id);
        plan.capture_times.push_back(d.t_arr + transit);
    }
    return plan;
}

}  // namespace

bool is_reachable(const Point& vehicle, const Point& demand, double speed) noexcept {
    return speed * std::abs(vehicle.x - demand.x) <= vehicle.y - demand.y;
}

bool deadline_edge(const Demand& i, const Demand& j) noexcept {
    if (i.id == j.id) {
        return false;
    }
    if (i.t_arr == j.t_arr && i.x == j.x) {
        return i.id < j.id;
    }
    return std::abs(i.x - j.x) <= j.t_arr - i.t_arr;
}

bool source_edge(const VehicleState& vehicle, const Demand& d, double transit_time) noexcept {
    const double slack = (d.t_arr + transit_time) - vehicle.t;
    return slack >= 0.0 && std::abs(vehicle.x - d.x) <= slack;
}

std::size_t ReachGraph::edge_count() const noexcept {
    std::size_t n = source_edges.size();
    for (const auto& out : adjacency) {
        n += out.size();
    }
    return n;
}

ReachGraph build_reach_graph(const VehicleState& vehicle, std::span<const Demand> demands,
                             double speed, double length) {
    check_preconditions(vehicle, demands, speed, length);

    ReachGraph g;
    g.source = vehicle;
    g.transit_time = length / speed;
    g.vertices.assign(demands.begin(), demands.end());
    const std::size_t n = g.vertices.size();

    g.topo_order.resize(n);
    std::iota(g.topo_order.begin(), g.topo_order.end(), std::size_t{0});
    std::sort(g.topo_order.begin(), g.topo_order.end(), [&](std::size_t a, std::size_t b) {
        const Demand& da = g.vertices[a];
        const Demand& db = g.vertices[b];
        return da.t_arr != db.t_arr ? da.t_arr < db.t_arr : da.id < db.id;
    });

    g.adjacency.assign(n, {});
    for (std::size_t a = 0; a < n; ++a) {
        const Demand& da = g.vertices[g.topo_order[a]];
        if (source_edge(vehicle, da, g.transit_time)) {
            g.source_edges.push_back(g.topo_order[a]);
        }
        // Only later (or coincident) arrivals can follow.
        for (std::size_t b = a + 1; b < n; ++b) {
            const Demand& db = g.vertices[g.topo_order[b]];
            if (deadline_edge(da, db)) {
                g.adjacency[g.topo_order[a]].push_back(g.topo_order[b]);
            }
        }
    }
    return g;
}

PathPlan longest_path(const ReachGraph& graph) {
    const std::size_t n = graph.vertices.size();
    if (graph.adjacency.size() != n) {
        throw ContractError("adjacency size does not match vertex count");
    }

    // Kahn's algorithm; a short order means a cycle.
    std::vector<std::size_t> indegree(n, 0);
    for (const auto& out : graph.adjacency) {
        for (std::size_t j : out) {
            if (j >= n) {
                throw ContractError("edge target out of range");
            }
            ++indegree[j];
        }
    }
    std::vector<std::size_t> order;
    order.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) {
            order.push_back(i);
        }
    }
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (std::size_t j : graph.adjacency[order[head]]) {
            if (--indegree[j] == 0) {
                order.push_back(j);
            }
        }
    }
    if (order.size() != n) {
        throw CycleError("reachability graph has a cycle (is v < 1?)");
    }

    // depth[i]: demands on the longest source path ending at i (0 = unreachable).
    std::vector<std::size_t> depth(n, 0);
    std::vector<std::size_t> pred(n, kNone);
    for (std::size_t i : graph.source_edges) {
        depth[i] = 1;
    }
    auto id_of = [&](std::size_t i) { return graph.vertices[i].id; };
    for (std::size_t i : order) {
        if (depth[i] == 0) {
            continue;
        }
        for (std::size_t j : graph.adjacency[i]) {
            const std::size_t cand = depth[i] + 1;
            if (cand > depth[j]) {
                depth[j] = cand;
                pred[j] = i;
            } else if (cand == depth[j] && pred[j] != kNone && id_of(i) < id_of(pred[j])) {
                pred[j] = i;
            }
        }
    }

    std::size_t end = kNone;
    for (std::size_t i = 0; i < n; ++i) {
        if (depth[i] == 0) {
            continue;
        }
        if (end == kNone || depth[i] > depth[end] ||
            (depth[i] == depth[end] && id_of(i) < id_of(end))) {
            end = i;
        }
    }

    std::vector<Demand> chain;
    for (std::size_t i = end; i != kNone; i = pred[i]) {
        chain.push_back(graph.vertices[i]);
    }
    std::reverse(chain.begin(), chain.end());
    return make_plan(chain, graph.transit_time);
}

PathPlan longest_chain_fast(const VehicleState& vehicle, std::span<const Demand> demands,
                            double speed, double length) {
    check_preconditions(vehicle, demands, speed, length);
    const double transit = length / speed;

    struct Key {
        double u;  // t - x
        double w;  // t + x
        std::size_t idx;
    };
    std::vector<Key> keys;
    keys.reserve(demands.size());
    for (std::size_t i = 0; i < demands.size(); ++i) {
        const Demand& d = demands[i];
        if (source_edge(vehicle, d, transit)) {
            keys.push_back({d.t_arr - d.x, d.t_arr + d.x, i});
        }
    }
    std::sort(keys.begin(), keys.end(), [&](const Key& a, const Key& b) {
        if (a.u != b.u) return a.u < b.u;
        if (a.w != b.w) return a.w < b.w;
        return demands[a.idx].id < demands[b.idx].id;
    });

    // Patience sorting for the longest non-decreasing subsequence in w.
    std::vector<std::size_t> tails;  // positions into keys
    std::vector<std::size_t> prev(keys.size(), kNone);
    for (std::size_t k = 0; k < keys.size(); ++k) {
        auto it = std::upper_bound(tails.begin(), tails.end(), keys[k].w,
                                   [&](double w, std::size_t pos) { return w < keys[pos].w; });
        if (it != tails.begin()) {
            prev[k] = *std::prev(it);
        }
        if (it == tails.end()) {
            tails.push_back(k);
        } else {
            *it = k;
        }
    }

    std::vector<Demand> chain;
    for (std::size_t k = tails.empty() ? kNone : tails.back(); k != kNone; k = prev[k]) {
        chain.push_back(demands[keys[k].idx]);
    }
    std::reverse(chain.begin(), chain.end());
    return make_plan(chain, transit);
}

}  // namespace dguard
