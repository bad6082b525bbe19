#pragma once

// Translational minimum Hamiltonian paths (targets drifting in +y at speed
// v < 1) and the TMHP-fraction policy built on them.

#include <cstddef>
#include <span>
#include <vector>

#include "dguard/core.hpp"
#include "dguard/run_result.hpp"

namespace dguard {

// (x, y) -> (x / sqrt(1 - v^2), y / (1 - v^2)). Throws ParameterError for v
// outside (0, 1).
Point g_map(const Point& p, double speed);
Point g_inv(const Point& p, double speed);

// Minimum time for a unit-speed vehicle at `vehicle` to meet a target that
// is now at `target` and moves in +y at `speed`. The vehicle heads straight
// for (x, y + speed * T).
double intercept_time(const Point& vehicle, const Point& target, double speed);

// Largest point set emhp_exact accepts.
inline constexpr std::size_t kExactSolverCap = 13;

struct HamiltonianPath {
    std::vector<std::size_t> order;  // indices into the point set
    double length = 0.0;
};

// Length of s -> points[order[0]] -> ... -> f, summed front to back.
double path_length(const Point& s, std::span<const Point> points,
                   std::span<const std::size_t> order, const Point& f);

// Optimal fixed-endpoint path by Held-Karp over subsets. Among equal-length
// optima the lexicographically smallest order wins. Throws SizeError above
// kExactSolverCap points.
HamiltonianPath emhp_exact(const Point& s, std::span<const Point> points, const Point& f);

// Local-search heuristic with both endpoints pinned. Nearest-neighbour
// tours built forward from s and backward from f are improved by 2-opt
// reversals and Or-opt relocations (1-3 points) until no move helps or 50 n^2
// candidate moves have been examined; instances of 8 to 24 points also get
// 30 seeded double-bridge restarts. Deterministic; accepted moves strictly
// shorten the path.
HamiltonianPath emhp_heuristic(const Point& s, std::span<const Point> points, const Point& f);

struct TmhpInstance {
    Point start;
    std::vector<Point> points;  // initial target coordinates
    Point finish;               // visited last; also translates
    double speed = 0.5;
};

struct TmhpSolution {
    std::vector<std::size_t> order;
    double duration = 0.0;     // executed with minimum-time intercepts
    double emhp_length = 0.0;  // same order, in g-transformed space
};

// EMHP in g-space (exact up to kExactSolverCap points, heuristic beyond),
// executed by chaining intercept_time along the order.
TmhpSolution tmhp_solve(const TmhpInstance& instance);

// Closed-form duration of executing `order`:
// emhp_length + v (y_f - y_s) / (1 - v^2).
double tmhp_drift_correction(const Point& s, const Point& f, double speed);

// TMHP-fraction policy (v < 1). Each iteration plans a TMHP through the
// outstanding demands with ordinate <= L/2, ending at the lowest one, and
// follows it for at most L/(2v) time units.
RunResult run_tf(const DemandStream& stream, const Point& start, const RunOptions& options = {});

}  // namespace dguard
