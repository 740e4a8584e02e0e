#include <gtest/gtest.h>

#include <map>
#include <random>

#include "surge/window.hpp"
#include "test_support.hpp"

using namespace surge;

namespace {
Query window_query(double w) {
    Query q;
    q.window_len = w;
    return q;
}
}  // namespace

TEST(Scheduler, AdmitSchedulesThreeEvents) {
    EventScheduler s(window_query(5));
    const auto ev = s.admit({0, 1, 0, 0, 10});
    ASSERT_EQ(ev.size(), 3u);
    EXPECT_EQ(ev[0].kind, EventKind::New);
    EXPECT_EQ(ev[0].due, 10);
    EXPECT_EQ(ev[1].kind, EventKind::Grown);
    EXPECT_EQ(ev[1].due, 15);
    EXPECT_EQ(ev[2].kind, EventKind::Expired);
    EXPECT_EQ(ev[2].due, 20);
    EXPECT_EQ(s.pending(), 3u);
}

TEST(Scheduler, OutsideAreaProducesNothing) {
    Query q = window_query(5);
    q.area = Box{0, 0, 10, 10};
    EventScheduler s(q);
    EXPECT_TRUE(s.admit({0, 1, 20, 20, 1}).empty());
    EXPECT_EQ(s.pending(), 0u);
    EXPECT_EQ(s.admitted(), 0u);
}

TEST(Scheduler, AdvanceReleasesInOrder) {
    EventScheduler s(window_query(5));
    s.admit({0, 1, 0, 0, 10});
    const auto ev = s.advance(20);
    ASSERT_EQ(ev.size(), 3u);
    EXPECT_EQ(ev[0].kind, EventKind::New);
    EXPECT_EQ(ev[1].kind, EventKind::Grown);
    EXPECT_EQ(ev[2].kind, EventKind::Expired);
    EXPECT_TRUE(s.live().empty());
    EXPECT_EQ(s.now(), 20);
}

TEST(Scheduler, SameInstantExpiredBeforeNew) {
    EventScheduler s(window_query(5));
    s.admit({0, 1, 0, 0, 0});
    s.advance(9);
    s.admit({1, 1, 0, 0, 10});
    const auto ev = s.advance(10);
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_EQ(ev[0].kind, EventKind::Expired);
    EXPECT_EQ(ev[0].rect.id, 0u);
    EXPECT_EQ(ev[1].kind, EventKind::New);
    EXPECT_EQ(ev[1].rect.id, 1u);
}

TEST(Scheduler, SimultaneousNewOrderedBySeq) {
    EventScheduler s(window_query(5));
    s.admit({0, 1, 0, 0, 10});
    s.admit({1, 1, 0, 0, 10});
    const auto ev = s.advance(10);
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_EQ(ev[0].rect.id, 0u);
    EXPECT_EQ(ev[1].rect.id, 1u);
    EXPECT_LT(ev[0].seq, ev[1].seq);
}

TEST(Scheduler, AdvanceOnEmptyQueue) {
    EventScheduler s(window_query(5));
    s.advance(3);
    EXPECT_TRUE(s.advance(3).empty());
}

TEST(Scheduler, RejectsOutOfOrder) {
    EventScheduler s(window_query(5));
    s.admit({0, 1, 0, 0, 10});
    s.advance(10);
    EXPECT_THROW(s.admit({1, 1, 0, 0, 9}), StreamOrderError);
    EXPECT_NO_THROW(s.admit({2, 1, 0, 0, 10}));
}

TEST(Scheduler, EventOrderIsTotal) {
    const Event a{{}, EventKind::Expired, 5, 9};
    const Event b{{}, EventKind::New, 5, 1};
    const Event c{{}, EventKind::New, 5, 2};
    EXPECT_TRUE(event_before(a, b));
    EXPECT_TRUE(event_before(b, c));
    EXPECT_FALSE(event_before(c, b));
}

TEST(Replay, LifecycleAndRecount) {
    fixtures::StreamSpec spec;
    spec.n = 500;
    spec.integer_t = true;
    const auto objs = fixtures::random_stream(spec, 3);
    const Query q = window_query(7);

    EventScheduler s(q);
    std::map<std::uint64_t, std::vector<EventKind>> seen;
    std::mt19937_64 rng(5);
    std::size_t i = 0;
    while (i < objs.size()) {
        const double t = objs[i].t_c;
        for (; i < objs.size() && objs[i].t_c == t; ++i) s.admit(objs[i]);
        for (const auto& e : s.advance(t)) seen[e.rect.id].push_back(e.kind);

        // Window membership from the registry matches a recount at t.
        std::size_t expected = 0;
        for (std::size_t j = 0; j < i; ++j) {
            const auto ph = window_phase(objs[j].t_c, t, q.window_len);
            if (!ph) continue;
            ++expected;
            auto it = s.live().find(objs[j].id);
            ASSERT_NE(it, s.live().end());
            EXPECT_EQ(it->second, *ph);
        }
        EXPECT_EQ(s.live().size(), expected);
    }
    for (const auto& e : s.drain()) seen[e.rect.id].push_back(e.kind);

    ASSERT_EQ(seen.size(), objs.size());
    for (const auto& [id, kinds] : seen)
        EXPECT_EQ(kinds, (std::vector<EventKind>{EventKind::New, EventKind::Grown, EventKind::Expired}));
}

TEST(Replay, EventCountIsThreePerObject) {
    const auto objs = fixtures::random_stream({}, 9);
    const auto ev = replay_events(objs, window_query(3));
    EXPECT_EQ(ev.size(), 3 * objs.size());
    for (std::size_t i = 1; i < ev.size(); ++i) EXPECT_FALSE(event_before(ev[i], ev[i - 1]));
}
