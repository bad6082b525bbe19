#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "dguard/deadline_policies.hpp"
#include "dguard/errors.hpp"

using namespace dguard;

namespace {

DemandStream hand_stream(double width, double length, double speed,
                         std::vector<std::pair<double, double>> tx) {
    std::vector<Demand> ds;
    for (std::size_t i = 0; i < tx.size(); ++i) {
        ds.push_back({.id = i, .t_arr = tx[i].first, .x = tx[i].second});
    }
    return DemandStream(make_env(width, length, speed, 1.0), std::move(ds), 0);
}

void expect_conservation(const RunResult& r, std::size_t n) {
    EXPECT_EQ(r.n_capt + r.n_esc, n);
    EXPECT_GE(r.capture_fraction, 0.0);
    EXPECT_LE(r.capture_fraction, 1.0);
    for (const Demand& d : r.outcomes) {
        EXPECT_TRUE(d.status == DemandStatus::captured || d.status == DemandStatus::escaped);
        EXPECT_FALSE(std::isnan(d.resolve_time));
    }
}

void expect_unit_speed(const RunResult& r) {
    for (std::size_t k = 1; k < r.trajectory.size(); ++k) {
        const Waypoint& a = r.trajectory[k - 1];
        const Waypoint& b = r.trajectory[k];
        EXPECT_GE(b.t, a.t);
        EXPECT_LE(std::hypot(b.x - a.x, b.y - a.y), (b.t - a.t) * (1.0 + 1e-9) + 1e-9);
    }
}

// Trace-level checks shared by all deadline policies: ordering, one
// resolution per demand, captures at the escape instant on the deadline and
// reachable from the vehicle state at the preceding commit.
void expect_legal_trace(const RunResult& r, const DemandStream& s) {
    const EnvParams& env = s.env();
    std::map<std::size_t, int> arrivals, resolutions;
    double last_t = -1.0;
    const TraceEvent* commit = nullptr;
    for (const TraceEvent& e : r.trace) {
        EXPECT_GE(e.t, last_t);
        last_t = e.t;
        switch (e.kind) {
            case EventKind::arrival: ++arrivals[*e.demand_id]; break;
            case EventKind::escape: {
                ++resolutions[*e.demand_id];
                EXPECT_DOUBLE_EQ(e.t, escape_time(s[*e.demand_id], env));
                break;
            }
            case EventKind::capture: {
                ++resolutions[*e.demand_id];
                const Demand& d = s[*e.demand_id];
                EXPECT_EQ(e.t, escape_time(d, env));
                EXPECT_NEAR(e.vehicle_x, d.x, 1e-9);
                EXPECT_EQ(e.vehicle_y, env.length());
                ASSERT_NE(commit, nullptr);
                const Point at_commit = demand_position(d, env.speed(), commit->t);
                EXPECT_TRUE(is_reachable({commit->vehicle_x, env.length()}, at_commit, env.speed()));
                break;
            }
            case EventKind::recompute: commit = &e; break;
        }
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_EQ(arrivals[i], 1);
        EXPECT_EQ(resolutions[i], 1);
    }
}

}  // namespace

TEST(Nclp, SingleReachableDemand) {
    const auto s = hand_stream(10, 10, 1, {{1.0, 3.0}});
    const auto r = run_nclp(s, 5.0);
    EXPECT_EQ(r.n_capt, 1u);
    EXPECT_DOUBLE_EQ(r.capture_fraction, 1.0);
}

TEST(Nclp, TwoNearlySimultaneousAtOppositeEnds) {
    const auto s = hand_stream(10, 100, 1, {{1.0, 0.0}, {1.001, 9.99}});
    const auto r = run_nclp(s, 5.0);
    EXPECT_EQ(r.n_capt, 1u);
    EXPECT_EQ(r.n_esc, 1u);
}

TEST(Nclp, ChainOfTwoBothCaptured) {
    const auto s = hand_stream(10, 10, 1, {{1.0, 5.0}, {2.0, 6.0}});
    const auto r = run_nclp(s, 5.0, {{.record_trace = true}});
    EXPECT_EQ(r.n_capt, 2u);
    EXPECT_EQ(r.capture_order, (std::vector<std::size_t>{0, 1}));
    expect_legal_trace(r, s);
}

TEST(Nclp, EmptyStreamIsVacuous) {
    const DemandStream s(make_env(10, 10, 1, 1), {}, 0);
    const auto r = run_nclp(s, 5.0);
    EXPECT_TRUE(r.vacuous);
    EXPECT_EQ(r.capture_fraction, 1.0);
}

TEST(Nclp, RejectsSlowRegime) {
    const auto s = hand_stream(10, 10, 0.5, {{1.0, 3.0}});
    EXPECT_THROW(run_nclp(s, 5.0), RegimeError);
    EXPECT_THROW(run_lp(s, 5.0, 1.0), RegimeError);
    EXPECT_THROW(run_gp(s, 5.0), RegimeError);
}

TEST(Lp, SingleDemand) {
    // Reachable from x = 0 once it arrives: |0 - 4| <= 3 + 5 - 3.
    const auto s = hand_stream(10, 10, 2, {{3.0, 4.0}});
    const auto r = run_lp(s, 0.0, 1.0);
    EXPECT_EQ(r.n_capt, 1u);
}

TEST(Lp, CannotBeatNclpOnOppositeEnds) {
    const auto s = hand_stream(10, 100, 1, {{1.0, 0.0}, {1.001, 9.99}});
    EXPECT_EQ(run_lp(s, 5.0, 1.0).n_capt, 1u);
}

TEST(Lp, RejectsBadEta) {
    const auto s = hand_stream(10, 10, 1, {{1.0, 3.0}});
    EXPECT_THROW(run_lp(s, 5.0, 0.0), ParameterError);
    EXPECT_THROW(run_lp(s, 5.0, 1.5), ParameterError);
    EXPECT_THROW(run_lp(s, 11.0, 1.0), ParameterError);
}

TEST(Lp, IdlesUntilNextArrival) {
    // Demand 0 is out of reach (|5 - 0| > 1 + 2); demand 1 arrives later
    // and is reachable from the idle vehicle.
    const auto s = hand_stream(10, 2, 1, {{1.0, 0.0}, {5.0, 5.5}});
    const auto r = run_lp(s, 5.0, 1.0, {{.record_trace = true}});
    EXPECT_EQ(r.n_capt, 1u);
    EXPECT_EQ(r.outcomes[1].status, DemandStatus::captured);
    expect_legal_trace(r, s);
}

TEST(Lp, IgnoresArrivalsMidPath) {
    // At t = 1 the plan is {0}; demand 1 arrives before demand 0 is
    // captured and is picked up at the recompute after the capture.
    const auto s = hand_stream(10, 5, 1, {{1.0, 5.0}, {2.0, 6.0}});
    const auto r = run_lp(s, 5.0, 1.0, {{.record_trace = true}});
    EXPECT_EQ(r.n_capt, 2u);
    std::size_t recomputes = 0;
    for (const auto& e : r.trace) recomputes += e.kind == EventKind::recompute ? 1 : 0;
    EXPECT_GE(recomputes, 2u);
}

TEST(Gp, SingleDemand) {
    const auto s = hand_stream(10, 10, 1, {{1.0, 2.0}});
    EXPECT_EQ(run_gp(s, 5.0).n_capt, 1u);
}

TEST(Gp, CapturesInEscapeOrder) {
    const auto s = hand_stream(10, 10, 1, {{1.0, 5.0}, {2.0, 6.0}});
    const auto r = run_gp(s, 5.0, {.record_trace = true});
    EXPECT_EQ(r.capture_order, (std::vector<std::size_t>{0, 1}));
    expect_legal_trace(r, s);
}

class SeededStreams : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(SeededStreams, DominanceLegalityConservation) {
    const std::uint64_t seed = GetParam();
    const double rate = 0.5 + static_cast<double>(seed % 3) * 0.75;
    const auto s = generate_stream(make_env(120, 500, 2, rate), 400, seed);
    const double start = 60.0;
    const auto nclp = run_nclp(s, start, {{.record_trace = true}});
    const auto lp = run_lp(s, start, 1.0, {{.record_trace = true}});
    const auto lp_half = run_lp(s, start, 0.5, {{.record_trace = true}});
    const auto gp = run_gp(s, start, {.record_trace = true});
    const auto fast = run_nclp(s, start, {{}, PathSolver::fast_chain});

    EXPECT_GE(nclp.n_capt, lp.n_capt);
    EXPECT_GE(nclp.n_capt, lp_half.n_capt);
    EXPECT_GE(nclp.n_capt, gp.n_capt);
    EXPECT_EQ(nclp.n_capt, fast.n_capt);
    for (const RunResult* r : {&nclp, &lp, &lp_half, &gp}) {
        expect_conservation(*r, s.size());
        expect_unit_speed(*r);
        expect_legal_trace(*r, s);
    }
}

INSTANTIATE_TEST_SUITE_P(Deadline, SeededStreams, ::testing::Range<std::uint64_t>(1, 13));

TEST(DeadlinePolicies, TraceJsonLines) {
    const auto s = hand_stream(10, 10, 1, {{1.0, 5.0}, {2.0, 6.0}});
    const auto r = run_lp(s, 5.0, 1.0, {{.record_trace = true}});
    std::ostringstream out;
    write_trace_jsonl(out, r.trace);
    const std::string text = out.str();
    EXPECT_NE(text.find("\"event\":\"capture\""), std::string::npos);
    EXPECT_NE(text.find("\"demand_id\":null"), std::string::npos);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), static_cast<long>(r.trace.size()));
}

// Mean F(GP) <= mean F(LP) + 2 pooled standard errors.
TEST(DeadlinePolicies, GreedyDoesNotBeatLongestPathOnAverage) {
    const int runs = 10;
    std::vector<double> gp, lp;
    for (int k = 0; k < runs; ++k) {
        const auto s = generate_stream(make_env(120, 500, 2, 1.0), 1000, 500 + k);
        gp.push_back(run_gp(s, 60.0).capture_fraction);
        lp.push_back(run_lp(s, 60.0, 1.0).capture_fraction);
    }
    auto stats = [](const std::vector<double>& xs) {
        double m = 0;
        for (double x : xs) m += x;
        m /= static_cast<double>(xs.size());
        double ss = 0;
        for (double x : xs) ss += (x - m) * (x - m);
        return std::pair{m, ss / static_cast<double>(xs.size() - 1)};
    };
    const auto [mg, vg] = stats(gp);
    const auto [ml, vl] = stats(lp);
    const double pooled_se = std::sqrt((vg + vl) / runs);
    EXPECT_LE(mg, ml + 2.0 * pooled_se);
}
