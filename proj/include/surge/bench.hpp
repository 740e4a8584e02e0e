#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "surge/cellindex.hpp"
#include "surge/detector.hpp"
#include "surge/model.hpp"
#include "surge/window.hpp"

namespace surge {

struct BenchSpec {
    Algo algo = Algo::Ccs;
    BoundMode bound_mode = BoundMode::Both;
};

struct BenchOptions {
    /// Events processed before timing and counting start.
    std::size_t warmup_events = 0;
    /// Keep the rank-1 score after every event.
    bool keep_scores = false;
};

struct AlgoReport {
    std::string algo;
    std::string bound_mode;
    std::uint64_t events = 0;  // timed events
    double mean_ns = 0.0;
    double median_ns = 0.0;
    double p99_ns = 0.0;
    bool exact = false;  // sweep counters present
    std::uint64_t sweeps = 0;
    std::uint64_t triggering_events = 0;
    double trigger_ratio = 0.0;
    double final_score = 0.0;
    std::vector<double> scores;
};

struct BenchReport {
    Query query;
    std::uint64_t objects = 0;
    std::uint64_t events = 0;
    std::vector<AlgoReport> algos;
};

std::string_view to_string(BoundMode m);
std::optional<BoundMode> parse_bound_mode(std::string_view s);

/// Replays `events` through each algorithm in turn, timing every event.
BenchReport run_bench(std::span<const Event> events, const Query& q, std::span<const BenchSpec> specs,
                      const BenchOptions& opt = {});

/// Convenience overload: builds the full event stream (drained) first.
BenchReport run_bench(std::span<const SpatialObject> objects, const Query& q,
                      std::span<const BenchSpec> specs, const BenchOptions& opt = {});

std::string report_to_json(const BenchReport& r);
BenchReport report_from_json(const std::string& text);
std::string report_table(const BenchReport& r);

}  // namespace surge
