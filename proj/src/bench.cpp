#include "surge/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>

#include <json.hpp>

namespace surge {

std::string_view to_string(BoundMode m) {
    switch (m) {
        case BoundMode::Both: return "both";
        case BoundMode::StaticOnly: return "static";
        case BoundMode::None: return "none";
    }
    return "unknown";
}

std::optional<BoundMode> parse_bound_mode(std::string_view s) {
    if (s == "both") return BoundMode::Both;
    if (s == "static") return BoundMode::StaticOnly;
    if (s == "none") return BoundMode::None;
    return std::nullopt;
}

namespace {

double percentile(std::vector<double>& v, double p) {
    if (v.empty()) return 0.0;
    const auto idx = static_cast<std::size_t>(p * static_cast<double>(v.size() - 1));
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
    return v[idx];
}

}  // namespace

BenchReport run_bench(std::span<const Event> events, const Query& q, std::span<const BenchSpec> specs,
                      const BenchOptions& opt) {
    using clock = std::chrono::steady_clock;
    BenchReport rep;
    rep.query = q;
    rep.events = events.size();
    for (const auto& e : events)
        if (e.kind == EventKind::New) ++rep.objects;

    for (const auto& spec : specs) {
        auto det = make_detector(spec.algo, q, spec.bound_mode);
        AlgoReport ar;
        ar.algo = std::string(to_string(spec.algo));
        ar.bound_mode = std::string(to_string(spec.bound_mode));
        std::vector<double> ns;
        ns.reserve(events.size());
        DetectorStats base{};
        for (std::size_t i = 0; i < events.size(); ++i) {
            if (i == opt.warmup_events) {
                if (auto s = det->stats()) base = *s;
            }
            const auto t0 = clock::now();
            const TopKResult r = det->on_event(events[i]);
            const auto t1 = clock::now();
            const double score = r.regions.empty() ? 0.0 : r.regions.front().score;
            ar.final_score = score;
            if (i < opt.warmup_events) continue;
            ns.push_back(static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
            if (opt.keep_scores) ar.scores.push_back(score);
        }
        ar.events = ns.size();
        if (!ns.empty()) ar.mean_ns = std::accumulate(ns.begin(), ns.end(), 0.0) / static_cast<double>(ns.size());
        ar.median_ns = percentile(ns, 0.5);
        ar.p99_ns = percentile(ns, 0.99);
        if (auto s = det->stats()) {
            ar.exact = true;
            ar.sweeps = s->sweeps - base.sweeps;
            ar.triggering_events = s->triggering_events - base.triggering_events;
            const auto ev = s->events - base.events;
            ar.trigger_ratio = ev ? static_cast<double>(ar.triggering_events) / static_cast<double>(ev) : 0.0;
        }
        rep.algos.push_back(std::move(ar));
    }
    return rep;
}

BenchReport run_bench(std::span<const SpatialObject> objects, const Query& q, std::span<const BenchSpec> specs,
                      const BenchOptions& opt) {
    const auto events = replay_events(objects, q, true);
    return run_bench(std::span<const Event>(events), q, specs, opt);
}

std::string report_to_json(const BenchReport& r) {
    nlohmann::json j;
    j["query"] = {{"width", r.query.width},   {"height", r.query.height}, {"window", r.query.window_len},
                  {"alpha", r.query.alpha},   {"k", r.query.k}};
    if (r.query.area) {
        const auto& a = *r.query.area;
        j["query"]["area"] = {a.x_min, a.y_min, a.x_max, a.y_max};
    }
    j["objects"] = r.objects;
    j["events"] = r.events;
    j["algos"] = nlohmann::json::array();
    for (const auto& a : r.algos) {
        nlohmann::json e{{"algo", a.algo},       {"bound_mode", a.bound_mode}, {"events", a.events},
                         {"mean_ns", a.mean_ns}, {"median_ns", a.median_ns},   {"p99_ns", a.p99_ns},
                         {"final_score", a.final_score}};
        if (a.exact) {
            e["sweeps"] = a.sweeps;
            e["triggering_events"] = a.triggering_events;
            e["trigger_ratio"] = a.trigger_ratio;
        }
        if (!a.scores.empty()) e["scores"] = a.scores;
        j["algos"].push_back(std::move(e));
    }
    return j.dump();
}

BenchReport report_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    BenchReport r;
    const auto& q = j.at("query");
    r.query.width = q.at("width").get<double>();
    r.query.height = q.at("height").get<double>();
    r.query.window_len = q.at("window").get<double>();
    r.query.alpha = q.at("alpha").get<double>();
    r.query.k = q.at("k").get<int>();
    if (q.contains("area")) {
        const auto& a = q.at("area");
        r.query.area = Box{a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>(), a.at(3).get<double>()};
    }
    r.objects = j.at("objects").get<std::uint64_t>();
    r.events = j.at("events").get<std::uint64_t>();
    for (const auto& e : j.at("algos")) {
        AlgoReport a;
        a.algo = e.at("algo").get<std::string>();
        a.bound_mode = e.at("bound_mode").get<std::string>();
        a.events = e.at("events").get<std::uint64_t>();
        a.mean_ns = e.at("mean_ns").get<double>();
        a.median_ns = e.at("median_ns").get<double>();
        a.p99_ns = e.at("p99_ns").get<double>();
        a.final_score = e.at("final_score").get<double>();
        if (e.contains("sweeps")) {
            a.exact = true;
            a.sweeps = e.at("sweeps").get<std::uint64_t>();
            a.triggering_events = e.at("triggering_events").get<std::uint64_t>();
            a.trigger_ratio = e.at("trigger_ratio").get<double>();
        }
        if (e.contains("scores")) a.scores = e.at("scores").get<std::vector<double>>();
        r.algos.push_back(std::move(a));
    }
    return r;
}

std::string report_table(const BenchReport& r) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%llu objects, %llu events\n", static_cast<unsigned long long>(r.objects),
                  static_cast<unsigned long long>(r.events));
    out += buf;
    std::snprintf(buf, sizeof buf, "%-8s %-7s %12s %12s %12s %10s %9s %12s\n", "algo", "bounds", "mean_us",
                  "median_us", "p99_us", "sweeps", "trigger%", "final_score");
    out += buf;
    for (const auto& a : r.algos) {
        if (a.exact)
            std::snprintf(buf, sizeof buf, "%-8s %-7s %12.3f %12.3f %12.3f %10llu %9.3f %12.6g\n", a.algo.c_str(),
                          a.bound_mode.c_str(), a.mean_ns / 1e3, a.median_ns / 1e3, a.p99_ns / 1e3,
                          static_cast<unsigned long long>(a.sweeps), 100.0 * a.trigger_ratio, a.final_score);
        else
            std::snprintf(buf, sizeof buf, "%-8s %-7s %12.3f %12.3f %12.3f %10s %9s %12.6g\n", a.algo.c_str(), "-",
                          a.mean_ns / 1e3, a.median_ns / 1e3, a.p99_ns / 1e3, "-", "-", a.final_score);
        out += buf;
    }
    return out;
}

}  // namespace surge
