#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "surge/bench.hpp"
#include "surge/detector.hpp"
#include "surge/generator.hpp"
#include "surge/stream_io.hpp"
#include "surge/window.hpp"
#include "test_support.hpp"

using namespace surge;

TEST(ParseRecord, CsvAndJson) {
    const auto a = parse_record("1.5, 2, 3.25, 7", 1);
    ASSERT_TRUE(a);
    EXPECT_EQ(a->t, 1.5);
    EXPECT_EQ(a->x, 2);
    EXPECT_EQ(a->y, 3.25);
    EXPECT_EQ(a->w, 7);
    const auto b = parse_record(R"({"t": 4, "x": -1, "y": 0.5, "w": 2})", 2);
    ASSERT_TRUE(b);
    EXPECT_EQ(b->t, 4);
    EXPECT_EQ(b->x, -1);
    EXPECT_FALSE(parse_record("", 3));
    EXPECT_FALSE(parse_record("   # comment", 4));
    EXPECT_FALSE(parse_record("t,x,y,w", 5));
}

TEST(ParseRecord, Errors) {
    EXPECT_THROW(parse_record("1,2,3", 1), ParseError);
    EXPECT_THROW(parse_record("1,2,3,4,5", 1), ParseError);
    EXPECT_THROW(parse_record("1,abc,3,4", 1), ParseError);
    EXPECT_THROW(parse_record("1,2,3,-4", 1), ParseError);
    EXPECT_THROW(parse_record("1,nan,3,4", 1), ParseError);
    EXPECT_THROW(parse_record("1,inf,3,4", 1), ParseError);
    EXPECT_THROW(parse_record(R"({"t": 1, "x": 2})", 1), ParseError);
    EXPECT_THROW(parse_record(R"({"t": 1, )", 1), ParseError);
    try {
        parse_record("1,2", 17);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 17u);
    }
}

TEST(StreamReader, NumbersObjectsAndRejectsRegression) {
    std::istringstream in("t,x,y,w\n0,1,1,1\n\n# gap\n0,2,2,2\n1,3,3,3\n0.5,4,4,4\n");
    StreamReader r(in);
    for (std::uint64_t id = 0; id < 3; ++id) {
        const auto o = r.next();
        ASSERT_TRUE(o);
        EXPECT_EQ(o->id, id);
    }
    EXPECT_THROW(r.next(), StreamOrderError);
}

TEST(StreamIo, CsvRoundTrip) {
    const auto objs = fixtures::random_stream({}, 12);
    std::stringstream ss;
    write_csv(ss, objs);
    const auto back = read_stream(ss);
    ASSERT_EQ(back.size(), objs.size());
    for (std::size_t i = 0; i < objs.size(); ++i) {
        EXPECT_EQ(back[i].t_c, objs[i].t_c);
        EXPECT_EQ(back[i].x, objs[i].x);
        EXPECT_EQ(back[i].y, objs[i].y);
        EXPECT_EQ(back[i].w, objs[i].w);
    }
}

namespace {

TopKResult sample_result() {
    TopKResult r{12.5, {}};
    BurstResult a;
    a.region = {0.1, 0.2, 1.1, 1.2};
    a.point = {1.1, 1.2};
    a.score = 1.0 / 3.0;
    a.rank = 1;
    a.placed = true;
    a.t = 12.5;
    r.regions.push_back(a);
    Query q;
    r.regions.push_back(to_result(std::nullopt, q, 12.5, 2));
    return r;
}

}  // namespace

TEST(Emit, FormatAndRoundTrip) {
    const auto r = sample_result();
    const auto line = format_result(r, "kccs");
    EXPECT_NE(line.find("\"algo\":\"kccs\""), std::string::npos);
    EXPECT_NE(line.find("\"score\":0.333333333333,"), std::string::npos);
    EXPECT_NE(line.find("\"placed\":false"), std::string::npos);
    EXPECT_EQ(line.find('\n'), std::string::npos);

    std::string algo;
    const auto back = parse_result(line, &algo);
    EXPECT_EQ(algo, "kccs");
    EXPECT_EQ(back.t, 12.5);
    ASSERT_EQ(back.regions.size(), 2u);
    EXPECT_EQ(back.regions[0].region, r.regions[0].region);
    EXPECT_NEAR(back.regions[0].score, 1.0 / 3.0, 1e-12);
    EXPECT_TRUE(back.regions[0].placed);
    EXPECT_FALSE(back.regions[1].placed);
    EXPECT_EQ(back.regions[1].rank, 2);
}

TEST(Emit, FailingSinkThrows) {
    std::ostringstream sink;
    sink.setstate(std::ios::badbit);
    EXPECT_THROW(emit_result(sample_result(), "ccs", sink), std::runtime_error);
}

TEST(Emit, IntervalMode) {
    std::ostringstream per, ticks;
    ResultEmitter every(per, "ccs", 0), interval(ticks, "ccs", 10);
    for (double t : {1.0, 4.0, 9.0, 10.0, 15.0, 31.0, 32.0}) {
        TopKResult r{t, {}};
        every.push(r);
        interval.push(r);
    }
    every.finish();
    interval.finish();
    EXPECT_EQ(every.written(), 7u);
    // Ticks at 10, 20 (crossed by 31) and the final flush.
    std::istringstream in(ticks.str());
    std::vector<double> ts;
    for (std::string line; std::getline(in, line);) ts.push_back(parse_result(line).t);
    EXPECT_EQ(ts, (std::vector<double>{9.0, 15.0, 32.0}));
}

TEST(Generator, Deterministic) {
    GenConfig gc;
    gc.n = 2000;
    gc.seed = 3;
    gc.burst_schedule.push_back({10, 40, 2, 4});
    const auto a = generate(gc), b = generate(gc);
    ASSERT_EQ(a.size(), 2000u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].x, b[i].x);
        EXPECT_EQ(a[i].t_c, b[i].t_c);
        EXPECT_EQ(a[i].w, b[i].w);
        EXPECT_EQ(a[i].id, i);
        EXPECT_GE(a[i].w, 1);
        EXPECT_LE(a[i].w, 100);
        EXPECT_TRUE(gc.extent.contains({a[i].x, a[i].y}));
        if (i) EXPECT_GE(a[i].t_c, a[i - 1].t_c);
    }
    gc.seed = 4;
    EXPECT_NE(generate(gc)[5].x, a[5].x);
}

TEST(Generator, UniformWhenUnskewed) {
    GenConfig gc;
    gc.n = 10000;
    gc.skew = 0;
    gc.seed = 77;
    const auto objs = generate(gc);
    std::vector<double> counts(100, 0);
    for (const auto& o : objs) {
        const int i = std::min(9, static_cast<int>(o.x / 100)), j = std::min(9, static_cast<int>(o.y / 100));
        counts[static_cast<std::size_t>(10 * i + j)] += 1;
    }
    double chi2 = 0;
    for (double c : counts) chi2 += (c - 100) * (c - 100) / 100;
    EXPECT_LT(chi2, 134.642);  // 99 degrees of freedom, p = 0.01
}

TEST(Generator, SkewConcentratesNearHotspots) {
    GenConfig gc;
    gc.n = 5000;
    gc.skew = 0.8;
    gc.hotspots = 4;
    const auto centres = hotspot_centres(gc);
    std::size_t near = 0;
    for (const auto& o : generate(gc))
        for (const auto& c : centres)
            if (std::hypot(o.x - c.x, o.y - c.y) < 4 * gc.hotspot_sigma) {
                ++near;
                break;
            }
    EXPECT_GT(static_cast<double>(near) / 5000, 0.75);
}

TEST(Generator, DoublingRateHalvesTimespan) {
    GenConfig gc;
    gc.n = 5000;
    gc.seed = 8;
    const auto slow = generate(gc);
    gc.rate *= 2;
    const auto fast = generate(gc);
    EXPECT_NEAR(fast.back().t_c / slow.back().t_c, 0.5, 1e-9);
    for (std::size_t i = 0; i < slow.size(); i += 97) EXPECT_EQ(fast[i].x, slow[i].x);
}

TEST(Generator, JsonRoundTripAndValidation) {
    auto gc = default_workload();
    gc.n = 123;
    const auto back = gen_config_from_json(gen_config_to_json(gc));
    EXPECT_EQ(back.n, 123u);
    EXPECT_EQ(back.seed, gc.seed);
    EXPECT_EQ(back.burst_schedule.size(), gc.burst_schedule.size());
    EXPECT_EQ(back.hotspot_sigma, gc.hotspot_sigma);
    GenConfig bad;
    bad.rate = 0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = {};
    bad.skew = 1.5;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = {};
    bad.burst_schedule.push_back({0, 1, 99, 2});
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Detector, FactoryAndNames) {
    for (const char* n : {"ccs", "gaps", "mgaps", "kccs", "kgaps", "kmgaps", "oracle", "naive"}) {
        const auto a = parse_algo(n);
        ASSERT_TRUE(a) << n;
        EXPECT_EQ(to_string(*a), n);
    }
    EXPECT_FALSE(parse_algo("fast"));
    Query q;
    q.k = 2;
    const auto ev = replay_events(fixtures::random_stream({}, 1), q);
    for (Algo a : {Algo::Ccs, Algo::Gaps, Algo::Mgaps, Algo::Kccs, Algo::Kgaps, Algo::Kmgaps, Algo::Oracle,
                   Algo::Naive}) {
        auto d = make_detector(a, q);
        TopKResult last;
        for (const auto& e : ev) last = d->on_event(e);
        const bool topk = a == Algo::Kccs || a == Algo::Kgaps || a == Algo::Kmgaps || a == Algo::Oracle;
        EXPECT_EQ(last.regions.size(), topk ? 2u : 1u) << to_string(a);
        EXPECT_EQ(d->stats().has_value(), a == Algo::Ccs || a == Algo::Kccs || a == Algo::Naive);
    }
}

TEST(Bench, ReportRoundTrip) {
    Query q;
    q.width = q.height = 2;
    q.window_len = 10;
    fixtures::StreamSpec spec;
    spec.n = 300;
    const auto objs = fixtures::random_stream(spec, 2);
    const std::vector<BenchSpec> specs{{Algo::Ccs, BoundMode::Both}, {Algo::Gaps, BoundMode::Both}};
    BenchOptions opt;
    opt.warmup_events = 50;
    opt.keep_scores = true;
    const auto rep = run_bench(std::span<const SpatialObject>(objs), q, specs, opt);
    EXPECT_EQ(rep.objects, 300u);
    EXPECT_EQ(rep.events, 900u);
    ASSERT_EQ(rep.algos.size(), 2u);
    EXPECT_EQ(rep.algos[0].events, 850u);
    EXPECT_TRUE(rep.algos[0].exact);
    EXPECT_FALSE(rep.algos[1].exact);
    EXPECT_GT(rep.algos[0].mean_ns, 0);

    const auto back = report_from_json(report_to_json(rep));
    EXPECT_EQ(back.query.width, 2);
    EXPECT_EQ(back.events, rep.events);
    ASSERT_EQ(back.algos.size(), 2u);
    EXPECT_EQ(back.algos[0].algo, "ccs");
    EXPECT_EQ(back.algos[0].sweeps, rep.algos[0].sweeps);
    EXPECT_EQ(back.algos[0].scores, rep.algos[0].scores);
    EXPECT_DOUBLE_EQ(back.algos[1].mean_ns, rep.algos[1].mean_ns);
    EXPECT_FALSE(report_table(rep).empty());
}
