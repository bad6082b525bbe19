#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "dguard/core.hpp"
#include "dguard/errors.hpp"
#include "dguard/stream_io.hpp"

using namespace dguard;

TEST(MakeEnv, ReferenceGeometryIntensity) {
    const EnvParams env = make_env(120, 500, 2, 1);
    EXPECT_DOUBLE_EQ(env.areal_intensity(), 1.0 / 240.0);
    EXPECT_DOUBLE_EQ(env.transit_time(), 250.0);
}

TEST(MakeEnv, UnitCase) { EXPECT_DOUBLE_EQ(make_env(1, 1, 1, 1).areal_intensity(), 1.0); }

TEST(MakeEnv, DirectEvaluation) {
    EXPECT_DOUBLE_EQ(make_env(10, 5, 0.5, 2).areal_intensity(), 0.4);
}

TEST(MakeEnv, RejectsNonPositiveAndNamesField) {
    try {
        make_env(10, 5, 0.0, 2);
        FAIL() << "expected ParameterError";
    } catch (const ParameterError& e) {
        EXPECT_EQ(e.field(), "v");
    }
    EXPECT_THROW(make_env(-1, 5, 1, 1), ParameterError);
    EXPECT_THROW(make_env(1, 0, 1, 1), ParameterError);
    EXPECT_THROW(make_env(1, 1, 1, -2), ParameterError);
    EXPECT_THROW(make_env(NAN, 1, 1, 1), ParameterError);
    EXPECT_THROW(make_env(1, INFINITY, 1, 1), ParameterError);
}

TEST(DemandPosition, ArrivalAndDeadline) {
    const EnvParams env = make_env(10, 50, 2, 1);
    const Demand d{.id = 0, .t_arr = 3.0, .x = 4.0};
    EXPECT_EQ(demand_position(d, env.speed(), 3.0), (Point{4.0, 0.0}));
    EXPECT_EQ(demand_position(d, env.speed(), escape_time(d, env)), (Point{4.0, 50.0}));
    EXPECT_LT(demand_position(d, env.speed(), 1.0).y, 0.0);
}

TEST(DemandPosition, DirectEvaluation) {
    const Demand d{.id = 0, .t_arr = 2.0, .x = 3.0};
    EXPECT_EQ(demand_position(d, 2.0, 5.0), (Point{3.0, 6.0}));
}

TEST(GenerateStream, EmptyStream) {
    const auto s = generate_stream(make_env(1, 1, 1, 1), 0, 7);
    EXPECT_TRUE(s.empty());
}

TEST(GenerateStream, DeterministicAndOrdered) {
    const EnvParams env = make_env(120, 500, 2, 1);
    const auto a = generate_stream(env, 1000, 42);
    const auto b = generate_stream(env, 1000, 42);
    const auto c = generate_stream(env, 1000, 43);
    ASSERT_EQ(a.size(), 1000u);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].t_arr, b[i].t_arr);
        EXPECT_EQ(a[i].x, b[i].x);
        EXPECT_EQ(a[i].id, i);
        EXPECT_GE(a[i].x, 0.0);
        EXPECT_LT(a[i].x, env.width());
        if (i > 0) EXPECT_GT(a[i].t_arr, a[i - 1].t_arr);
        differs = differs || a[i].x != c[i].x;
    }
    EXPECT_TRUE(differs);
}

TEST(GenerateStream, MeanInterarrival) {
    const auto s = generate_stream(make_env(120, 500, 2, 1), 10000, 2024);
    const double mean = s[s.size() - 1].t_arr / static_cast<double>(s.size());
    // Exponential(1) has unit variance: 3 standard errors at n = 10000.
    EXPECT_NEAR(mean, 1.0, 3.0 / std::sqrt(10000.0));
}

TEST(GenerateStream, AbscissaeUniformChiSquare) {
    const auto s = generate_stream(make_env(120, 500, 2, 1), 10000, 77);
    std::vector<double> bins(12, 0.0);
    for (const Demand& d : s.demands()) bins[static_cast<std::size_t>(d.x / 10.0)] += 1.0;
    const double expected = 10000.0 / 12.0;
    double chi2 = 0.0;
    for (double o : bins) chi2 += (o - expected) * (o - expected) / expected;
    // chi-square 0.999 quantile with 11 degrees of freedom.
    EXPECT_LT(chi2, 31.264);
}

TEST(DemandStream, RejectsUnorderedArrivals) {
    const EnvParams env = make_env(10, 10, 1, 1);
    std::vector<Demand> ds{{.id = 0, .t_arr = 2.0, .x = 1.0}, {.id = 1, .t_arr = 1.0, .x = 1.0}};
    EXPECT_THROW(DemandStream(env, ds, 0), ContractError);
    std::vector<Demand> tie{{.id = 0, .t_arr = 1.0, .x = 1.0}, {.id = 1, .t_arr = 1.0, .x = 2.0}};
    EXPECT_THROW(DemandStream(env, tie, 0), ContractError);
    std::vector<Demand> outside{{.id = 0, .t_arr = 1.0, .x = 10.0}};
    EXPECT_THROW(DemandStream(env, outside, 0), ContractError);
}

TEST(RegionCount, TrivialCases) {
    const EnvParams env = make_env(10, 10, 1, 5);
    const DemandStream empty(env, {}, 0);
    EXPECT_EQ(region_count(empty, {0, 0, 10, 10}, 10.0), 0u);
    const auto s = generate_stream(env, 200, 5);
    EXPECT_EQ(region_count(s, {2, 3, 2, 8}, 10.0), 0u);
    EXPECT_EQ(region_count(s, {2, 3, 6, 3}, 10.0), 0u);
}

TEST(RegionCount, CountsByPosition) {
    const EnvParams env = make_env(10, 10, 1, 1);
    const DemandStream s(env,
                         {{.id = 0, .t_arr = 1.0, .x = 1.0},
                          {.id = 1, .t_arr = 2.0, .x = 5.0},
                          {.id = 2, .t_arr = 4.0, .x = 5.5},
                          {.id = 3, .t_arr = 9.0, .x = 5.0}},
                         0);
    // At t = 5 ordinates are 4, 3, 1; demand 3 has not arrived.
    EXPECT_EQ(region_count(s, {4, 0, 6, 5}, 5.0), 2u);
    EXPECT_EQ(region_count(s, {0, 0, 10, 10}, 5.0), 3u);
}

// Unserviced outstanding demands form a spatial Poisson process with
// intensity lambda / (v W): means, variances and independence of disjoint
// rectangles.
TEST(RegionCount, PoissonStatistics) {
    const EnvParams env = make_env(10, 100, 1, 5);
    const double t = 10.0;
    const Rect a{2, 3, 6, 8};   // area 20
    const Rect b{6.5, 0, 9.5, 5};  // area 15, disjoint from a
    const std::size_t trials = 10000;
    double sa = 0, saa = 0, sb = 0, sbb = 0, sab = 0;
    for (std::size_t k = 0; k < trials; ++k) {
        const auto s = generate_stream(env, 200, 1000 + k);
        const double ca = static_cast<double>(region_count(s, a, t));
        const double cb = static_cast<double>(region_count(s, b, t));
        sa += ca; saa += ca * ca; sb += cb; sbb += cb * cb; sab += ca * cb;
    }
    const double n = static_cast<double>(trials);
    const double ma = sa / n, mb = sb / n;
    const double va = (saa - n * ma * ma) / (n - 1), vb = (sbb - n * mb * mb) / (n - 1);
    const double cov = (sab - n * ma * mb) / (n - 1);
    const double mean_a = env.areal_intensity() * a.area();  // 10
    const double mean_b = env.areal_intensity() * b.area();  // 7.5
    EXPECT_NEAR(ma, mean_a, 3.0 * std::sqrt(mean_a / n));
    EXPECT_NEAR(mb, mean_b, 3.0 * std::sqrt(mean_b / n));
    EXPECT_GE(ma / va, 0.9);
    EXPECT_LE(ma / va, 1.1);
    EXPECT_GE(mb / vb, 0.9);
    EXPECT_LE(mb / vb, 1.1);
    EXPECT_LT(std::abs(cov / std::sqrt(va * vb)), 0.05);
}

TEST(StreamIo, RoundTripIsBitIdentical) {
    const auto s = generate_stream(make_env(120, 500, 2, 1.5), 300, 99);
    std::stringstream buf;
    write_stream_jsonl(buf, s);
    const auto back = read_stream_jsonl(buf);
    EXPECT_EQ(back.env(), s.env());
    EXPECT_EQ(back.seed(), s.seed());
    ASSERT_EQ(back.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_EQ(back[i].t_arr, s[i].t_arr);
        EXPECT_EQ(back[i].x, s[i].x);
    }
}

TEST(StreamIo, RejectsMalformedInput) {
    std::stringstream empty;
    EXPECT_THROW(read_stream_jsonl(empty), ConfigError);
    std::stringstream short_count(
        "{\"env\":{\"W\":1,\"L\":1,\"v\":1,\"lambda\":1},\"seed\":0,\"n\":2}\n"
        "{\"id\":0,\"t_arr\":0.5,\"x\":0.1}\n");
    EXPECT_THROW(read_stream_jsonl(short_count), ConfigError);
    std::stringstream garbage("not json\n");
    EXPECT_THROW(read_stream_jsonl(garbage), ConfigError);
}
