#include "dguard/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "dguard/bounds.hpp"
#include "dguard/errors.hpp"
#include "dguard/tmhp.hpp"

namespace dguard {

using nlohmann::json;

namespace {

bool needs_fast_regime(Policy p) { return p != Policy::tf; }

ExperimentSpec at_rate(const ExperimentSpec& spec, double rate) {
    ExperimentSpec s = spec;
    s.env = make_env(spec.env.width(), spec.env.length(), spec.env.speed(), rate);
    s.sweep.reset();
    return s;
}

const BoundValue* find_bound(const std::vector<BoundValue>& bounds, const std::string& name) {
    for (const BoundValue& b : bounds) {
        if (b.name == name) return &b;
    }
    return nullptr;
}

}  // namespace

const char* to_string(Policy policy) noexcept {
    switch (policy) {
        case Policy::nclp: return "nclp";
        case Policy::lp: return "lp";
        case Policy::gp: return "gp";
        case Policy::tf: return "tf";
    }
    return "unknown";
}

Policy parse_policy(const std::string& name) {
    if (name == "nclp") return Policy::nclp;
    if (name == "lp") return Policy::lp;
    if (name == "gp") return Policy::gp;
    if (name == "tf") return Policy::tf;
    throw ConfigError("unknown policy '" + name + "' (expected nclp, lp, gp or tf)");
}

std::vector<double> LambdaGrid::values() const {
    std::vector<double> out;
    if (!(step > 0.0) || !(max >= min)) {
        return out;
    }
    const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(min + static_cast<double>(k) * step);
    }
    return out;
}

void validate(const ExperimentSpec& spec) {
    if (spec.runs < 1) {
        throw ConfigError("runs must be >= 1");
    }
    if (!(spec.eta > 0.0 && spec.eta <= 1.0)) {
        throw ConfigError("eta must lie in (0, 1]");
    }
    const double v = spec.env.speed();
    if (needs_fast_regime(spec.policy) && v < 1.0) {
        throw ConfigError(std::string("policy ") + to_string(spec.policy) + " requires v >= 1");
    }
    if (spec.policy == Policy::tf && v >= 1.0) {
        throw ConfigError("policy tf requires v < 1");
    }
    const Point start = start_position(spec);
    if (!(start.x >= 0.0 && start.x <= spec.env.width() && start.y >= 0.0 &&
          start.y <= spec.env.length())) {
        throw ConfigError("start position lies outside the environment");
    }
    if (needs_fast_regime(spec.policy) && start.y != spec.env.length()) {
        throw ConfigError("deadline policies start on the deadline (start_y = L)");
    }
    if (spec.sweep) {
        const auto grid = spec.sweep->values();
        if (grid.empty()) {
            throw ConfigError("lambda grid is empty");
        }
        if (!(grid.front() > 0.0)) {
            throw ConfigError("lambda grid must be positive");
        }
    }
    if (!(spec.beta_tsp > 0.0)) {
        throw ConfigError("beta_tsp must be > 0");
    }
}

Point start_position(const ExperimentSpec& spec) {
    const EnvParams& env = spec.env;
    const double default_y = spec.policy == Policy::tf ? env.length() / 2.0 : env.length();
    return {spec.start_x.value_or(env.width() / 2.0), spec.start_y.value_or(default_y)};
}

RunResult run_policy(const ExperimentSpec& spec, const DemandStream& stream,
                     const RunOptions& options) {
    const Point start = start_position(spec);
    DeadlinePolicyOptions dl;
    dl.record_trace = options.record_trace;
    dl.solver = spec.solver;
    switch (spec.policy) {
        case Policy::nclp: return run_nclp(stream, start.x, dl);
        case Policy::lp: return run_lp(stream, start.x, spec.eta, dl);
        case Policy::gp: return run_gp(stream, start.x, options);
        case Policy::tf: return run_tf(stream, start, options);
    }
    throw ConfigError("unknown policy");
}

std::vector<BoundValue> bound_annotations(const EnvParams& env, double beta_tsp) {
    std::vector<BoundValue> out;
    const double v = env.speed();
    const double lambda = env.rate();
    const double w = env.width();
    const double l = env.length();
    if (v >= 1.0) {
        out.push_back({"lp_lower_bound", lp_lower_bound(lambda, w), l >= v * w, "L >= vW"});
        out.push_back({"lp_competitive_factor", lp_competitive_factor(v, w, l), true,
                       "F(LP) >= factor * F(NCLP)"});
    } else {
        out.push_back({"causal_upper_bound", causal_upper_bound(v, lambda, w), true, "v < 1"});
        out.push_back({"tf_lower_bound", tf_lower_bound(v, lambda, w, beta_tsp), true,
                       "v -> 0+, lambda -> inf"});
    }
    return out;
}

Summary monte_carlo(const ExperimentSpec& spec) {
    validate(spec);
    if (spec.sweep) {
        throw ConfigError("monte_carlo takes a single rate; use sweep() for a grid");
    }

    std::vector<double> fractions(spec.runs, 0.0);
    std::vector<char> vacuous(spec.runs, 0);
    auto replicate = [&](std::size_t k) {
        const DemandStream stream = generate_stream(spec.env, spec.n_demands, spec.base_seed + k);
        const RunResult r = run_policy(spec, stream);
        fractions[k] = r.capture_fraction;
        vacuous[k] = r.vacuous ? 1 : 0;
    };

    const unsigned threads =
        std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(spec.runs)));
    if (threads == 1) {
        for (std::size_t k = 0; k < spec.runs; ++k) replicate(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back([&] {
                for (std::size_t k; (k = next.fetch_add(1)) < spec.runs;) replicate(k);
            });
        }
    }

    Summary s;
    s.policy = spec.policy;
    s.env = spec.env;
    s.runs = spec.runs;
    s.n_demands = spec.n_demands;
    s.fractions = fractions;
    s.any_vacuous = std::any_of(vacuous.begin(), vacuous.end(), [](char c) { return c != 0; });

    double sum = 0.0;
    for (double f : fractions) sum += f;
    s.mean = sum / static_cast<double>(spec.runs);
    if (spec.runs > 1) {
        double ss = 0.0;
        for (double f : fractions) ss += (f - s.mean) * (f - s.mean);
        s.std_dev = std::sqrt(ss / static_cast<double>(spec.runs - 1));
    }
    s.std_error = s.std_dev / std::sqrt(static_cast<double>(spec.runs));
    s.bounds = bound_annotations(spec.env, spec.beta_tsp);
    return s;
}

std::vector<Summary> sweep(const ExperimentSpec& spec) {
    validate(spec);
    std::vector<Summary> rows;
    if (!spec.sweep) {
        rows.push_back(monte_carlo(spec));
        return rows;
    }
    for (double rate : spec.sweep->values()) {
        rows.push_back(monte_carlo(at_rate(spec, rate)));
    }
    return rows;
}

ExperimentSpec spec_from_json(const json& j) {
    try {
        ExperimentSpec s;
        s.policy = parse_policy(j.at("policy").get<std::string>());
        const json& e = j.at("env");
        s.env = make_env(e.at("W").get<double>(), e.at("L").get<double>(), e.at("v").get<double>(),
                         e.value("lambda", 1.0));
        s.eta = j.value("eta", 1.0);
        s.n_demands = j.value("n_demands", std::size_t{2000});
        s.runs = j.value("runs", std::size_t{10});
        s.base_seed = j.value("base_seed", std::uint64_t{1});
        if (j.contains("sweep") && !j.at("sweep").is_null()) {
            const json& g = j.at("sweep");
            s.sweep = LambdaGrid{g.at("min").get<double>(), g.at("max").get<double>(),
                                 g.at("step").get<double>()};
        }
        if (j.contains("start_x")) s.start_x = j.at("start_x").get<double>();
        if (j.contains("start_y")) s.start_y = j.at("start_y").get<double>();
        const std::string solver = j.value("solver", std::string("graph_dp"));
        if (solver == "graph_dp") {
            s.solver = PathSolver::graph_dp;
        } else if (solver == "fast_chain") {
            s.solver = PathSolver::fast_chain;
        } else {
            throw ConfigError("unknown solver '" + solver + "'");
        }
        s.threads = j.value("threads", 1u);
        s.beta_tsp = j.value("beta_tsp", 0.7120);
        validate(s);
        return s;
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("malformed experiment spec: ") + ex.what());
    } catch (const ParameterError& ex) {
        throw ConfigError(std::string("invalid environment: ") + ex.what());
    }
}

json spec_to_json(const ExperimentSpec& spec) {
    json j = {
        {"policy", to_string(spec.policy)},
        {"env",
         {{"W", spec.env.width()},
          {"L", spec.env.length()},
          {"v", spec.env.speed()},
          {"lambda", spec.env.rate()}}},
        {"eta", spec.eta},
        {"n_demands", spec.n_demands},
        {"runs", spec.runs},
        {"base_seed", spec.base_seed},
        {"solver", spec.solver == PathSolver::graph_dp ? "graph_dp" : "fast_chain"},
        {"threads", spec.threads},
        {"beta_tsp", spec.beta_tsp},
    };
    if (spec.sweep) {
        j["sweep"] = {{"min", spec.sweep->min}, {"max", spec.sweep->max}, {"step", spec.sweep->step}};
    }
    if (spec.start_x) j["start_x"] = *spec.start_x;
    if (spec.start_y) j["start_y"] = *spec.start_y;
    return j;
}

json summary_to_json(const Summary& s) {
    json bounds = json::array();
    for (const BoundValue& b : s.bounds) {
        bounds.push_back({{"name", b.name},
                          {"value", b.value},
                          {"applicable", b.applicable},
                          {"condition", b.condition}});
    }
    return {
        {"policy", to_string(s.policy)},
        {"env",
         {{"W", s.env.width()},
          {"L", s.env.length()},
          {"v", s.env.speed()},
          {"lambda", s.env.rate()},
          {"areal_intensity", s.env.areal_intensity()}}},
        {"runs", s.runs},
        {"n_demands", s.n_demands},
        {"mean", s.mean},
        {"std", s.std_dev},
        {"stderr", s.std_error},
        {"fractions", s.fractions},
        {"bounds", bounds},
        {"metadata",
         {{"estimator",
           "mean of per-run capture fractions; every run continues until all demands are "
           "captured or escaped"},
          {"vacuous_runs", s.any_vacuous}}},
    };
}

std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_sweep_csv(std::ostream& out, const std::vector<Summary>& rows) {
    static const char* kBoundColumns[] = {"lp_lower_bound", "lp_competitive_factor",
                                          "causal_upper_bound", "tf_lower_bound"};
    out << "lambda,mean,std,stderr,runs,n_demands";
    for (const char* c : kBoundColumns) out << ',' << c;
    out << '\n';
    for (const Summary& s : rows) {
        out << format_number(s.env.rate()) << ',' << format_number(s.mean) << ','
            << format_number(s.std_dev) << ',' << format_number(s.std_error) << ',' << s.runs << ','
            << s.n_demands;
        for (const char* c : kBoundColumns) {
            out << ',';
            const BoundValue* b = find_bound(s.bounds, c);
            if (b && b->applicable) out << format_number(b->value);
        }
        out << '\n';
    }
}

void write_sweep_svg(std::ostream& out, const std::vector<Summary>& rows, const std::string& title) {
    constexpr double kW = 640.0, kH = 420.0, kLeft = 60.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;
    double lo = 0.0, hi = 1.0;
    if (!rows.empty()) {
        lo = rows.front().env.rate();
        hi = rows.back().env.rate();
    }
    if (hi <= lo) hi = lo + 1.0;
    auto px = [&](double lambda) { return kLeft + (lambda - lo) / (hi - lo) * (kW - kLeft - kRight); };
    auto py = [&](double f) {
        f = std::clamp(f, 0.0, 1.0);
        return kTop + (1.0 - f) * (kH - kTop - kBottom);
    };

    std::ostringstream body;
    body << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
         << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    body << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    body << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
    body << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kW - kRight << "\" y2=\""
         << py(0) << "\" stroke=\"black\"/>\n";
    body << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kLeft << "\" y2=\""
         << py(1) << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double f = k / 4.0;
        body << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(f) + 4 << "\" text-anchor=\"end\">" << f
             << "</text>\n";
    }
    body << "<text x=\"" << px(lo) << "\" y=\"" << kH - 25 << "\">" << format_number(lo) << "</text>\n";
    body << "<text x=\"" << px(hi) << "\" y=\"" << kH - 25 << "\" text-anchor=\"end\">"
         << format_number(hi) << "</text>\n";
    body << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 8
         << "\" text-anchor=\"middle\">arrival rate lambda</text>\n";

    auto polyline = [&](auto value_of, const char* colour, const char* dash) {
        body << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-dasharray=\"" << dash
             << "\" points=\"";
        for (const Summary& s : rows) {
            const auto v = value_of(s);
            if (v) body << px(s.env.rate()) << ',' << py(*v) << ' ';
        }
        body << "\"/>\n";
    };
    polyline([](const Summary& s) { return std::optional<double>(s.mean); }, "red", "none");
    const char* colours[] = {"green", "gray", "black", "blue"};
    const char* names[] = {"lp_lower_bound", "lp_competitive_factor", "causal_upper_bound",
                           "tf_lower_bound"};
    for (int b = 0; b < 4; ++b) {
        const std::string name = names[b];
        bool any = false;
        for (const Summary& s : rows) any = any || find_bound(s.bounds, name);
        if (!any) continue;
        polyline(
            [&](const Summary& s) -> std::optional<double> {
                const BoundValue* bv = find_bound(s.bounds, name);
                if (bv && bv->applicable) return bv->value;
                return std::nullopt;
            },
            colours[b], "6,4");
    }
    for (const Summary& s : rows) {
        const double x = px(s.env.rate());
        body << "<line x1=\"" << x << "\" y1=\"" << py(s.mean - s.std_dev) << "\" x2=\"" << x
             << "\" y2=\"" << py(s.mean + s.std_dev) << "\" stroke=\"red\"/>\n";
        body << "<circle cx=\"" << x << "\" cy=\"" << py(s.mean) << "\" r=\"2.5\" fill=\"red\"/>\n";
    }
    body << "</svg>\n";
    out << body.str();
}

}  // namespace dguard
