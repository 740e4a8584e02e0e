#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "surge/cellindex.hpp"
#include "surge/model.hpp"
#include "surge/window.hpp"

namespace surge {

class GuardExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kOracleLimit = 5000;

struct LiveObject {
    SpatialObject object;
    Phase phase = Phase::Current;
};

/// Live objects with their window tags at time `now`.
class Snapshot {
public:
    Snapshot() = default;

    /// Builds the snapshot at `now` from scratch using the window rule.
    static Snapshot at(std::span<const SpatialObject> objects, const Query& q, double now);

    /// Replays one event.
    void apply(const Event& e);

    double now() const { return now_; }
    const std::vector<LiveObject>& live() const { return live_; }
    std::size_t size() const { return live_.size(); }
    /// Total raw weight per window.
    WeightSums totals() const;

private:
    double now_ = 0.0;
    std::vector<LiveObject> live_;
    std::unordered_map<std::uint64_t, std::size_t> pos_;
};

/// Best point by exhaustive evaluation over the rectangle arrangement.
/// Throws GuardExceeded above kOracleLimit live objects.
BurstResult brute_best(const Snapshot& s, const Query& q);

/// Greedy top-k: each round removes the objects inside the chosen region.
TopKResult brute_topk(const Snapshot& s, const Query& q, int k);

/// Burst score (normalized) of a closed region over the snapshot's objects.
double region_score(const Snapshot& s, const Box& r, const Query& q);

/// Baseline that re-sweeps every touched cell on every event.
class NaiveDetector {
public:
    explicit NaiveDetector(Query q);
    BurstResult on_event(const Event& e) { return inner_.on_event(e); }
    const DetectorStats& stats() const { return inner_.stats(); }

private:
    CellCspot inner_;
};

}  // namespace surge
