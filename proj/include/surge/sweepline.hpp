#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "surge/model.hpp"

namespace surge {

/// A rectangle as seen by one sweep: its extent, weight and window.
struct SweepRect {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;
    double w = 0.0;
    Phase phase = Phase::Current;
};

struct SweepResult {
    Point point;
    WeightSums sums;   // raw weights covering point
    double score = 0;  // burst_score(sums, alpha), not divided by |W|
};

struct SweepStats {
    std::size_t max_open_intervals = 0;
    std::size_t stops = 0;
};

struct SweepOptions {
    double alpha = 0.5;
    /// Absolute tolerance on raw scores when comparing candidates.
    double tol = kTolerance;
    /// Recomputes every slot from scratch after each stop and throws
    /// std::logic_error on any mismatch. Test use only.
    bool verify = false;
};

/// Canonical order among equally good points: higher y first, then smaller x.
inline bool point_before(Point a, Point b) { return a.y > b.y || (a.y == b.y && a.x < b.x); }

/// True when (s, past, p) beats the best so far: higher score, then smaller
/// past-window weight, then point_before. Score and past compare within tol.
inline bool better_candidate(double s, double past, Point p, double best_s, double best_past, Point best_p,
                             double tol) {
    if (s > best_s + tol) return true;
    if (s < best_s - tol) return false;
    if (past < best_past - tol) return true;
    if (past > best_past + tol) return false;
    return point_before(p, best_p);
}

/// Top-down sweep over the rectangles clipped to box. Returns the best point
/// in box under closed coverage, or nullopt when no rectangle touches box.
/// Among tied points it returns the first double in point_before order, so
/// the answer depends only on the score field, not on how the arrangement
/// happens to be cut up.
std::optional<SweepResult> sl_cspot(std::span<const SweepRect> rects, const Box& box,
                                    const SweepOptions& opt, SweepStats* stats = nullptr);

/// Convenience form: rectangles outside both windows at `now` are ignored.
std::optional<SweepResult> sl_cspot(std::span<const RectObject> rects, const Query& q,
                                    const Box& box, double now);

/// Normalized scores of point p over the live rectangles at `now`.
ScorePair point_score(Point p, std::span<const RectObject> rects, const Query& q, double now);

}  // namespace surge
