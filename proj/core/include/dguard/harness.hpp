#pragma once

// Monte-Carlo experiments: replicate runs, lambda sweeps and their reports.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dguard/core.hpp"
#include "dguard/deadline_policies.hpp"
#include "dguard/run_result.hpp"

namespace dguard {

enum class Policy { nclp, lp, gp, tf };

const char* to_string(Policy policy) noexcept;
Policy parse_policy(const std::string& name);  // throws ConfigError

struct LambdaGrid {
    double min = 1.0;
    double max = 1.0;
    double step = 1.0;

    // min, min + step, ... up to max (inclusive, within step * 1e-9).
    std::vector<double> values() const;
};

struct ExperimentSpec {
    Policy policy = Policy::lp;
    EnvParams env = make_env(120.0, 500.0, 2.0, 1.0);
    double eta = 1.0;
    std::size_t n_demands = 2000;
    std::size_t runs = 10;
    std::uint64_t base_seed = 1;
    std::optional<LambdaGrid> sweep;
    // Defaults: (W/2, L) for nclp/lp/gp, (W/2, L/2) for tf.
    std::optional<double> start_x;
    std::optional<double> start_y;
    PathSolver solver = PathSolver::graph_dp;
    unsigned threads = 1;
    double beta_tsp = 0.7120;
};

// Throws ConfigError for runs == 0, eta outside (0, 1], policy/regime
// mismatch, a start outside the environment, or an empty/invalid grid.
void validate(const ExperimentSpec& spec);

Point start_position(const ExperimentSpec& spec);

// One simulation of spec.policy on `stream`.
RunResult run_policy(const ExperimentSpec& spec, const DemandStream& stream,
                     const RunOptions& options = {});

struct BoundValue {
    std::string name;
    double value = 0.0;
    bool applicable = true;  // false when outside the bound's stated hypothesis
    std::string condition;
};

// Bounds relevant to env's regime, in a fixed order.
std::vector<BoundValue> bound_annotations(const EnvParams& env, double beta_tsp = 0.7120);

struct Summary {
    Policy policy = Policy::lp;
    EnvParams env = make_env(1.0, 1.0, 1.0, 1.0);
    std::size_t runs = 0;
    std::size_t n_demands = 0;
    double mean = 0.0;
    double std_dev = 0.0;   // sample (n - 1) standard deviation
    double std_error = 0.0; // std_dev / sqrt(runs)
    std::vector<double> fractions;  // by replicate k, seed base_seed + k
    bool any_vacuous = false;
    std::vector<BoundValue> bounds;
};

// Runs spec.runs replicates with seeds base_seed + k at spec.env's rate.
Summary monte_carlo(const ExperimentSpec& spec);

// One Summary per grid rate; replicate seeds are shared across rates.
std::vector<Summary> sweep(const ExperimentSpec& spec);

ExperimentSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const ExperimentSpec& spec);
nlohmann::json summary_to_json(const Summary& summary);

// Header: lambda,mean,std,stderr,runs,n_demands,lp_lower_bound,
// lp_competitive_factor,causal_upper_bound,tf_lower_bound. Bounds outside
// their hypothesis are left empty. Numbers use shortest round-trip form.
void write_sweep_csv(std::ostream& out, const std::vector<Summary>& rows);

// Mean +- one standard deviation against lambda, plus bound curves.
void write_sweep_svg(std::ostream& out, const std::vector<Summary>& rows, const std::string& title);

// Shortest round-trip decimal form of a double.
std::string format_number(double value);

}  // namespace dguard
