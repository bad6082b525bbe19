#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dguard/bounds.hpp"
#include "dguard/errors.hpp"
#include "dguard/harness.hpp"
#include "dguard/reachability.hpp"
#include "dguard/stream_io.hpp"
#include "dguard/tmhp.hpp"

using nlohmann::json;

namespace {

// TF geometry used when none is given; the source experiments leave it open.
constexpr double kTfDefaultWidth = 100.0;
constexpr double kTfDefaultLength = 200.0;
constexpr double kTfDefaultSpeed = 0.05;

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw dguard::ConfigError("cannot open '" + path + "'");
    return in;
}

// Writes to `path`, or stdout for "" and "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw dguard::ConfigError("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

json read_json(const std::string& path) {
    try {
        if (path == "-") return json::parse(std::cin);
        std::ifstream in = open_in(path);
        return json::parse(in);
    } catch (const json::exception& ex) {
        throw dguard::ConfigError("'" + path + "': " + ex.what());
    }
}

dguard::Point parse_point(const json& j) {
    if (j.is_array()) return {j.at(0).get<double>(), j.at(1).get<double>()};
    return {j.at("x").get<double>(), j.at("y").get<double>()};
}

// Experiment flags shared by simulate and sweep. Flags override the spec file.
struct ExperimentFlags {
    std::string spec_file;
    std::string policy;
    double width = 0, length = 0, speed = 0, rate = 0, eta = 1;
    std::size_t n_demands = 0, runs = 0;
    std::uint64_t seed = 0;
    double start_x = 0, start_y = 0;
    std::string solver;
    unsigned threads = 1;
    double beta = dguard::kBetaTsp;

    CLI::Option* o_width = nullptr;
    CLI::Option* o_length = nullptr;
    CLI::Option* o_speed = nullptr;
    CLI::Option* o_rate = nullptr;
    CLI::Option* o_eta = nullptr;
    CLI::Option* o_n = nullptr;
    CLI::Option* o_runs = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_start_x = nullptr;
    CLI::Option* o_start_y = nullptr;
    CLI::Option* o_solver = nullptr;
    CLI::Option* o_threads = nullptr;
    CLI::Option* o_beta = nullptr;

    void attach(CLI::App* app) {
        app->add_option("--spec", spec_file, "experiment spec (JSON)");
        app->add_option("--policy", policy, "nclp | lp | gp | tf");
        o_width = app->add_option("-W,--width", width, "corridor width");
        o_length = app->add_option("-L,--length", length, "distance to the deadline");
        o_speed = app->add_option("-v,--speed", speed, "demand speed (vehicle speed is 1)");
        o_rate = app->add_option("--lambda", rate, "arrival rate");
        o_eta = app->add_option("--eta", eta, "LP fraction of each plan to execute");
        o_n = app->add_option("-n,--demands", n_demands, "demands per run");
        o_runs = app->add_option("--runs", runs, "replicates");
        o_seed = app->add_option("--seed", seed, "base seed; replicate k uses seed + k");
        o_start_x = app->add_option("--start-x", start_x, "initial vehicle abscissa");
        o_start_y = app->add_option("--start-y", start_y, "initial vehicle ordinate");
        o_solver = app->add_option("--solver", solver, "graph_dp | fast_chain");
        o_threads = app->add_option("--threads", threads, "worker threads for replicates");
        o_beta = app->add_option("--beta-tsp", beta, "TSP constant for the TF bound");
    }

    // Returns the spec plus which TF default parameters were filled in.
    std::pair<dguard::ExperimentSpec, std::string> build() const {
        json j;
        if (!spec_file.empty()) j = read_json(spec_file);
        if (!j.is_object()) j = json::object();
        if (!policy.empty()) j["policy"] = policy;
        if (!j.contains("policy")) j["policy"] = "lp";
        std::string tf_defaults;
        if (!j.contains("env")) {
            if (j["policy"] == "tf") {
                j["env"] = {{"W", kTfDefaultWidth}, {"L", kTfDefaultLength}, {"v", kTfDefaultSpeed}};
                const auto note = [&](const char* name, double value, const CLI::Option* opt) {
                    if (*opt) return;
                    if (!tf_defaults.empty()) tf_defaults += ", ";
                    tf_defaults += std::string(name) + "=" + dguard::format_number(value);
                };
                note("W", kTfDefaultWidth, o_width);
                note("L", kTfDefaultLength, o_length);
                note("v", kTfDefaultSpeed, o_speed);
            } else {
                j["env"] = {{"W", 120.0}, {"L", 500.0}, {"v", 2.0}};
            }
        }
        json& env = j["env"];
        if (*o_width) env["W"] = width;
        if (*o_length) env["L"] = length;
        if (*o_speed) env["v"] = speed;
        if (*o_rate) env["lambda"] = rate;
        if (*o_eta) j["eta"] = eta;
        if (*o_n) j["n_demands"] = n_demands;
        if (*o_runs) j["runs"] = runs;
        if (*o_seed) j["base_seed"] = seed;
        if (*o_start_x) j["start_x"] = start_x;
        if (*o_start_y) j["start_y"] = start_y;
        if (*o_solver) j["solver"] = solver;
        if (*o_threads) j["threads"] = threads;
        if (*o_beta) j["beta_tsp"] = beta;
        return {dguard::spec_from_json(j), tf_defaults};
    }
};

void label_defaults(json& out, const std::string& tf_defaults) {
    if (tf_defaults.empty()) return;
    out["metadata"]["defaults"] =
        tf_defaults + ": this tool's defaults for tf runs, not published experiment parameters";
}

int cmd_simulate(const ExperimentFlags& flags, const std::string& out_path,
                 const std::string& trace_path) {
    auto [spec, tf_defaults] = flags.build();
    spec.sweep.reset();
    json out = dguard::summary_to_json(dguard::monte_carlo(spec));
    out["spec"] = dguard::spec_to_json(spec);
    label_defaults(out, tf_defaults);
    if (!trace_path.empty()) {
        const auto stream = dguard::generate_stream(spec.env, spec.n_demands, spec.base_seed);
        const auto run = dguard::run_policy(spec, stream, {.record_trace = true});
        Output trace(trace_path);
        dguard::write_trace_jsonl(trace.stream(), run.trace);
    }
    Output o(out_path);
    o.stream() << out.dump(2) << '\n';
    return 0;
}

int cmd_sweep(const ExperimentFlags& flags, std::optional<dguard::LambdaGrid> grid,
              const std::string& csv_path, const std::string& svg_path,
              const std::string& json_path) {
    auto [spec, tf_defaults] = flags.build();
    if (grid) spec.sweep = grid;
    if (!spec.sweep) spec.sweep = dguard::LambdaGrid{spec.env.rate(), spec.env.rate(), 1.0};
    dguard::validate(spec);
    const auto rows = dguard::sweep(spec);
    {
        Output csv(csv_path);
        dguard::write_sweep_csv(csv.stream(), rows);
    }
    if (!svg_path.empty()) {
        std::string title = std::string("policy ") + dguard::to_string(spec.policy) +
                            ", W=" + dguard::format_number(spec.env.width()) +
                            ", L=" + dguard::format_number(spec.env.length()) +
                            ", v=" + dguard::format_number(spec.env.speed());
        if (!tf_defaults.empty()) title += " (default geometry)";
        Output svg(svg_path);
        dguard::write_sweep_svg(svg.stream(), rows, title);
    }
    if (!json_path.empty()) {
        json out = {{"spec", dguard::spec_to_json(spec)}, {"rows", json::array()}};
        for (const auto& r : rows) out["rows"].push_back(dguard::summary_to_json(r));
        label_defaults(out, tf_defaults);
        Output o(json_path);
        o.stream() << out.dump(2) << '\n';
    }
    return 0;
}

int cmd_bounds(double speed, double rate, double width, double length, double beta) {
    const auto env = dguard::make_env(width, length, speed, rate);
    json bounds = json::array();
    for (const auto& b : dguard::bound_annotations(env, beta)) {
        bounds.push_back({{"name", b.name},
                          {"value", b.value},
                          {"applicable", b.applicable},
                          {"condition", b.condition}});
    }
    const json out = {
        {"inputs", {{"v", speed}, {"lambda", rate}, {"W", width}, {"L", length}, {"beta_tsp", beta}}},
        {"regime", speed >= 1.0 ? "fast" : "slow"},
        {"alpha", rate * width / 2.0},
        {"areal_intensity", env.areal_intensity()},
        {"bounds", bounds},
    };
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_graph(const std::string& stream_path, std::optional<double> start_x, double t0,
              const std::string& solver) {
    std::ifstream in = open_in(stream_path);
    const auto stream = dguard::read_stream_jsonl(in);
    const auto& env = stream.env();
    const dguard::VehicleState vehicle{start_x.value_or(env.width() / 2.0), env.length(), t0};
    std::vector<dguard::Demand> live;
    for (const auto& d : stream.demands()) {
        if (dguard::escape_time(d, env) > t0) live.push_back(d);
    }
    const auto graph = dguard::build_reach_graph(vehicle, live, env.speed(), env.length());
    const auto plan = solver == "fast_chain"
                          ? dguard::longest_chain_fast(vehicle, live, env.speed(), env.length())
                          : dguard::longest_path(graph);

    json vertices = json::array();
    for (const auto& d : graph.vertices) {
        vertices.push_back({{"id", d.id}, {"t_arr", d.t_arr}, {"x", d.x},
                            {"escape_time", dguard::escape_time(d, env)}});
    }
    json edges = json::array();
    for (std::size_t k : graph.source_edges) {
        edges.push_back({{"from", "source"}, {"to", graph.vertices[k].id}});
    }
    for (std::size_t a = 0; a < graph.adjacency.size(); ++a) {
        for (std::size_t b : graph.adjacency[a]) {
            edges.push_back({{"from", graph.vertices[a].id}, {"to", graph.vertices[b].id}});
        }
    }
    const json out = {
        {"source", {{"x", vehicle.x}, {"y", vehicle.y}, {"t", vehicle.t}}},
        {"transit_time", graph.transit_time},
        {"vertices", vertices},
        {"edges", edges},
        {"longest_path",
         {{"solver", solver}, {"length", plan.length()}, {"order", plan.order},
          {"capture_times", plan.capture_times}}},
    };
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_tmhp(const std::string& in_path) {
    const json j = read_json(in_path);
    dguard::TmhpInstance inst;
    try {
        inst.start = parse_point(j.at("s"));
        inst.finish = parse_point(j.at("f"));
        inst.speed = j.at("v").get<double>();
        for (const auto& p : j.at("points")) inst.points.push_back(parse_point(p));
    } catch (const json::exception& ex) {
        throw dguard::ConfigError(std::string("malformed TMHP instance: ") + ex.what());
    }
    const auto sol = dguard::tmhp_solve(inst);
    const json out = {
        {"order", sol.order},
        {"duration", sol.duration},
        {"emhp_length", sol.emhp_length},
        {"solver", inst.points.size() <= dguard::kExactSolverCap ? "exact" : "heuristic"},
    };
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_gen_stream(double width, double length, double speed, double rate, std::size_t n,
                   std::uint64_t seed, const std::string& out_path) {
    const auto env = dguard::make_env(width, length, speed, rate);
    Output o(out_path);
    dguard::write_stream_jsonl(o.stream(), dguard::generate_stream(env, n, seed));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary-guarding simulations with translating demands"};
    app.require_subcommand(1);

    ExperimentFlags sim_flags;
    std::string sim_out, sim_trace;
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo runs of one spec; prints Summary JSON");
    sim_flags.attach(sim);
    sim->add_option("-o,--out", sim_out, "summary path (default stdout)");
    sim->add_option("--trace", sim_trace, "event trace (JSONL) of the first replicate");

    ExperimentFlags sweep_flags;
    std::vector<double> grid_values;
    std::string csv_out, svg_out, sweep_json;
    auto* sw = app.add_subcommand("sweep", "Monte-Carlo runs over a lambda grid; writes CSV");
    sweep_flags.attach(sw);
    sw->add_option("--grid", grid_values, "lambda grid: MIN MAX STEP")->expected(3);
    sw->add_option("-o,--out", csv_out, "CSV path (default stdout)");
    sw->add_option("--svg", svg_out, "also render an SVG plot");
    sw->add_option("--json", sweep_json, "also write per-lambda Summary JSON");

    double b_v = 0, b_lambda = 0, b_w = 0, b_l = 0, b_beta = dguard::kBetaTsp;
    auto* bnd = app.add_subcommand("bounds", "Analytical capture-fraction bounds as JSON");
    bnd->add_option("-v,--speed", b_v)->required();
    bnd->add_option("--lambda", b_lambda)->required();
    bnd->add_option("-W,--width", b_w)->required();
    bnd->add_option("-L,--length", b_l)->required();
    bnd->add_option("--beta-tsp", b_beta);

    std::string g_stream, g_solver = "graph_dp";
    std::optional<double> g_start_x;
    double g_t0 = 0.0;
    auto* gr = app.add_subcommand("graph", "Reachability graph and longest path of a stream");
    gr->add_option("--stream", g_stream, "stream JSONL")->required();
    gr->add_option("--start-x", g_start_x, "vehicle abscissa on the deadline (default W/2)");
    gr->add_option("--t0", g_t0, "planning time; demands escaped by then are dropped");
    gr->add_option("--solver", g_solver)->check(CLI::IsMember({"graph_dp", "fast_chain"}));

    std::string t_in = "-";
    auto* tm = app.add_subcommand("tmhp-solve", "Solve a translating Hamiltonian path instance");
    tm->add_option("-i,--in", t_in, "instance JSON {s, f, v, points} (default stdin)");

    double s_w = 120, s_l = 500, s_v = 2, s_lambda = 1;
    std::size_t s_n = 2000;
    std::uint64_t s_seed = 1;
    std::string s_out;
    auto* gs = app.add_subcommand("gen-stream", "Generate a Poisson demand stream (JSONL)");
    gs->add_option("-W,--width", s_w);
    gs->add_option("-L,--length", s_l);
    gs->add_option("-v,--speed", s_v);
    gs->add_option("--lambda", s_lambda);
    gs->add_option("-n,--demands", s_n);
    gs->add_option("--seed", s_seed);
    gs->add_option("-o,--out", s_out, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) return cmd_simulate(sim_flags, sim_out, sim_trace);
        if (*sw) {
            std::optional<dguard::LambdaGrid> grid;
            if (!grid_values.empty()) {
                grid = dguard::LambdaGrid{grid_values[0], grid_values[1], grid_values[2]};
            }
            return cmd_sweep(sweep_flags, grid, csv_out, svg_out, sweep_json);
        }
        if (*bnd) return cmd_bounds(b_v, b_lambda, b_w, b_l, b_beta);
        if (*gr) return cmd_graph(g_stream, g_start_x, g_t0, g_solver);
        if (*tm) return cmd_tmhp(t_in);
        if (*gs) return cmd_gen_stream(s_w, s_l, s_v, s_lambda, s_n, s_seed, s_out);
    } catch (const dguard::Error& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    }
    return 0;
}
