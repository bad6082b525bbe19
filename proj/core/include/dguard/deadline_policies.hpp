#pragma once

// Policies for the fast-demand regime (v >= 1). The vehicle never leaves the
// deadline; every capture uses intercept motion: move horizontally to the
// demand's abscissa, wait, and capture at its escape instant t_arr + L/v.

#include "dguard/core.hpp"
#include "dguard/reachability.hpp"
#include "dguard/run_result.hpp"

namespace dguard {

// How longest paths are computed. Both give the same path length; the
// captured sets can differ when several longest paths exist.
enum class PathSolver { graph_dp, fast_chain };

struct DeadlinePolicyOptions : RunOptions {
    PathSolver solver = PathSolver::graph_dp;
};

// Non-causal longest path: one plan over the whole stream (including demands
// that have not yet arrived) from (start_x, L) at t = 0.
RunResult run_nclp(const DemandStream& stream, double start_x,
                   const DeadlinePolicyOptions& options = {});

// Causal longest path. At each recompute instant the plan covers the
// outstanding demands only; after ceil(eta * len) captures it recomputes.
// With nothing reachable the vehicle idles until the next arrival.
RunResult run_lp(const DemandStream& stream, double start_x, double eta,
                 const DeadlinePolicyOptions& options = {});

// Greedy: repeatedly intercept the reachable outstanding demand that escapes
// first (highest ordinate), ties by smallest id.
RunResult run_gp(const DemandStream& stream, double start_x, const RunOptions& options = {});

}  // namespace dguard
