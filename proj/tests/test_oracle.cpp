#include <gtest/gtest.h>

#include <random>

#include "surge/oracle.hpp"
#include "test_support.hpp"

using namespace surge;

namespace {

Query oracle_query(double b, double a, double alpha) {
    Query q;
    q.width = b;
    q.height = a;
    q.window_len = 1;
    q.alpha = alpha;
    return q;
}

// Objects at t=0 are past at now=1.5, objects at t=1 are current.
Snapshot mixed(const std::vector<SpatialObject>& objs, const Query& q) { return Snapshot::at(objs, q, 1.5); }

}  // namespace

TEST(Oracle, EmptyAndSingle) {
    const Query q = oracle_query(1, 1, 0.5);
    const auto empty = brute_best(Snapshot{}, q);
    EXPECT_FALSE(empty.placed);
    EXPECT_EQ(empty.score, 0);

    const auto one = brute_best(mixed({{0, 4, 2, 3, 1}}, q), q);
    EXPECT_TRUE(one.placed);
    EXPECT_DOUBLE_EQ(one.score, 4);
    EXPECT_TRUE(one.region.contains({2, 3}));
}

TEST(Oracle, BestAvoidsPastNeighbour) {
    // Current at (0,0), past at (-0.5,-0.5): the winning region keeps the past one out.
    const Query q = oracle_query(1, 1, 0.5);
    const auto s = mixed({{0, 1, 0, 0, 1}, {1, 1, -0.5, -0.5, 0}}, q);
    const auto r = brute_best(s, q);
    EXPECT_DOUBLE_EQ(r.score, 1.0);
    EXPECT_DOUBLE_EQ(region_score(s, r.region, q), 1.0);
}

TEST(Oracle, LeftBottomCandidatesAreNotEnough) {
    // Every (left edge, bottom edge) corner lies in the past rectangle, so
    // that candidate set tops out at 1-alpha while the true optimum is 1.
    const Query q = oracle_query(1, 1, 0.5);
    std::vector<SpatialObject> objs{{0, 1, 0, 0, 1}, {1, 1, -0.5, -0.5, 0}};
    const auto s = mixed(objs, q);
    double left_bottom = 0;
    for (const auto& gx : objs)
        for (const auto& gy : objs) {
            const Point p{gx.x, gy.y};
            left_bottom = std::max(left_bottom, region_score(s, region_from_point(p, q), q));
        }
    EXPECT_DOUBLE_EQ(left_bottom, 0.5);
    EXPECT_DOUBLE_EQ(brute_best(s, q).score, 1.0);
}

TEST(Oracle, LatticeSelfConsistency) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0, 4), ua(0.05, 0.95);
    std::uniform_int_distribution<int> w(1, 100), nn(1, 20);
    for (int inst = 0; inst < 40; ++inst) {
        const Query q = oracle_query(1 + u(rng) / 4, 1 + u(rng) / 4, ua(rng));
        std::vector<SpatialObject> objs;
        const int n = nn(rng);
        for (int i = 0; i < n; ++i)
            objs.push_back({static_cast<std::uint64_t>(i), double(w(rng)), u(rng), u(rng), i % 3 ? 1.0 : 0.0});
        const auto s = mixed(objs, q);
        const double best = brute_best(s, q).score;
        // Dense lattice of region corners: never beats the oracle.
        const double step = std::min(q.width, q.height) / 50;
        double lattice = 0;
        for (double x = -1.5; x <= 5.5; x += step)
            for (double y = -1.5; y <= 5.5; y += step)
                lattice = std::max(lattice, region_score(s, Box{x, y, x + q.width, y + q.height}, q));
        ASSERT_LE(lattice, best + 1e-9);
        // ...and the oracle's own region really scores what it claims.
        const auto r = brute_best(s, q);
        ASSERT_NEAR(region_score(s, r.region, q), r.score, 1e-9);
    }
}

TEST(Oracle, GuardRefusesLargeInputs) {
    const Query q = oracle_query(1, 1, 0.5);
    std::vector<SpatialObject> objs;
    for (std::uint64_t i = 0; i <= kOracleLimit; ++i) objs.push_back({i, 1, double(i % 100), double(i / 100), 1});
    const auto s = mixed(objs, q);
    EXPECT_THROW(brute_best(s, q), GuardExceeded);
    objs.pop_back();
    EXPECT_NO_THROW(brute_best(mixed(objs, q), q));
}

TEST(Oracle, TopKRemovesCoveredObjects) {
    const Query q = oracle_query(2, 2, 0.5);
    std::vector<SpatialObject> objs;
    for (std::uint64_t i = 0; i < 3; ++i) objs.push_back({i, 1, 1, 1, 1});
    objs.push_back({3, 1, 1.5, 1.5, 1});  // overlaps the first cluster
    objs.push_back({4, 2, 10, 10, 1});
    const auto r = brute_topk(mixed(objs, q), q, 3);
    ASSERT_EQ(r.regions.size(), 3u);
    EXPECT_DOUBLE_EQ(r.regions[0].score, 4);
    EXPECT_DOUBLE_EQ(r.regions[1].score, 2);
    EXPECT_FALSE(r.regions[2].placed);
    EXPECT_THROW(brute_topk(mixed(objs, q), q, 0), InvalidQuery);
}

TEST(Oracle, TopKCurrentOnlyIsNonIncreasing) {
    // Without past objects removing objects never raises a score.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 10);
    for (int inst = 0; inst < 30; ++inst) {
        const Query q = oracle_query(2, 2, 0.5);
        std::vector<SpatialObject> objs;
        for (std::uint64_t i = 0; i < 60; ++i) objs.push_back({i, 1 + u(rng), u(rng), u(rng), 1});
        const auto r = brute_topk(mixed(objs, q), q, 4);
        for (std::size_t i = 1; i < r.regions.size(); ++i) EXPECT_LE(r.regions[i].score, r.regions[i - 1].score);
    }
}

TEST(Oracle, SnapshotApplyMatchesAt) {
    surge::fixtures::StreamSpec spec;
    spec.n = 300;
    const auto objs = surge::fixtures::random_stream(spec, 4);
    Query q = oracle_query(1, 1, 0.5);
    q.window_len = 9;
    Snapshot inc;
    for (const auto& e : replay_events(objs, q)) inc.apply(e);
    EXPECT_EQ(inc.size(), 0u);

    const double t = objs[150].t_c + 0.5 * (objs[151].t_c - objs[150].t_c);
    Snapshot mid;
    for (const auto& e : replay_events(objs, q, false))
        if (e.due <= t) mid.apply(e);
    const auto fresh = Snapshot::at(objs, q, t);
    EXPECT_EQ(mid.size(), fresh.size());
    EXPECT_NEAR(mid.totals().current, fresh.totals().current, 1e-9);
    EXPECT_NEAR(mid.totals().past, fresh.totals().past, 1e-9);
}
