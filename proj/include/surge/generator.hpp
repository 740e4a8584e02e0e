#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "surge/model.hpp"

namespace surge {

struct BurstWindow {
    double t_start = 0.0;
    double t_end = 0.0;
    int hotspot = 0;
    double multiplier = 1.0;
};

/// Synthetic workload: uniform background plus Gaussian hotspots.
struct GenConfig {
    std::size_t n = 10000;
    double rate = 36000.0;  // objects per hour
    int hotspots = 8;
    double hotspot_sigma = 10.0;
    double skew = 0.6;  // share of hotspot mass outside bursts
    std::vector<BurstWindow> burst_schedule;
    std::uint64_t seed = 1;
    Box extent{0.0, 0.0, 1000.0, 1000.0};
    int w_min = 1;
    int w_max = 100;
    double t0 = 0.0;

    /// Throws std::invalid_argument on inconsistent settings.
    void validate() const;
};

/// Deterministic for a fixed config. Arrival gaps come from their own random
/// stream, so changing the rate rescales time without moving objects.
std::vector<SpatialObject> generate(const GenConfig& gc);

/// Hotspot centres drawn for gc (the same ones generate() uses).
std::vector<Point> hotspot_centres(const GenConfig& gc);

/// The skewed workload used by the benchmarks.
GenConfig default_workload();
/// Query that goes with default_workload().
Query default_query();

GenConfig gen_config_from_json(const std::string& text);
std::string gen_config_to_json(const GenConfig& gc);

}  // namespace surge
