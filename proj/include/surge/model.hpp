#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace surge {

/// Absolute tolerance for comparing normalized scores.
inline constexpr double kTolerance = 1e-9;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Closed axis-aligned box [x_min, x_max] x [y_min, y_max].
struct Box {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    bool empty() const { return x_min > x_max || y_min > y_max; }

    bool contains(Point p) const {
        return x_min <= p.x && p.x <= x_max && y_min <= p.y && p.y <= y_max;
    }
    bool intersects(const Box& o) const {
        return x_min <= o.x_max && o.x_min <= x_max && y_min <= o.y_max && o.y_min <= y_max;
    }
    /// True when the intersection has positive area (edge contact does not count).
    bool overlaps_interior(const Box& o) const {
        return x_min < o.x_max && o.x_min < x_max && y_min < o.y_max && o.y_min < y_max;
    }

    friend bool operator==(const Box&, const Box&) = default;
};

Box intersect(const Box& a, const Box& b);

struct SpatialObject {
    std::uint64_t id = 0;
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double t_c = 0.0;
};

class InvalidQuery : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A continuous bursty-region query: region size width x height (b x a),
/// window length, burstiness weight alpha and number of regions k.
struct Query {
    std::optional<Box> area;
    double width = 1.0;
    double height = 1.0;
    double window_len = 1.0;
    double alpha = 0.5;
    int k = 1;

    /// Throws InvalidQuery when a field is out of range.
    void validate() const;

    /// Domain of admissible top-right corners, clamped so that the region stays inside area.
    std::optional<Box> valid_domain() const;

    /// Origin of every grid used by the detectors.
    Point grid_anchor() const;
};

enum class Phase : std::uint8_t { Current, Past };

/// The a x b rectangle anchored at an object's location. x_max/y_max are
/// computed once so that every coverage test sees identical edges.
struct RectObject {
    std::uint64_t id = 0;
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;
    double t_c = 0.0;
    int lvl = 1;

    Box extent() const { return {x, y, x_max, y_max}; }
};

/// Closed coverage: edges and corners count.
inline bool covers(const RectObject& g, Point p) {
    return g.x <= p.x && p.x <= g.x_max && g.y <= p.y && p.y <= g.y_max;
}

/// Normalized scores with respect to the current and the past window.
struct ScorePair {
    double f_c = 0.0;
    double f_p = 0.0;
};

/// Raw weight sums of the current and the past window (not divided by |W|).
struct WeightSums {
    double current = 0.0;
    double past = 0.0;

    ScorePair normalized(double window_len) const {
        return {current / window_len, past / window_len};
    }
};

/// alpha * max(f_c - f_p, 0) + (1 - alpha) * f_c.
///
/// Positively homogeneous, so it can be evaluated on raw weight sums and
/// divided by the window length afterwards.
inline double burst_score(ScorePair s, double alpha) {
    const double lift = s.f_c > s.f_p ? s.f_c - s.f_p : 0.0;
    return alpha * lift + (1.0 - alpha) * s.f_c;
}

inline double burst_score(WeightSums s, double alpha) {
    return burst_score(ScorePair{s.current, s.past}, alpha);
}

/// Sum of weights divided by the window length.
double window_score(std::span<const double> weights, double window_len);

std::optional<RectObject> to_rectangle(const SpatialObject& o, const Query& q);

/// The a x b region whose top-right corner is p. Its lower edges are placed so
/// that it holds exactly the objects whose rectangles cover p.
Box region_from_point(Point p, const Query& q);

/// Due times of the grown and expired events of an object created at t_c.
inline double grown_due(double t_c, double window_len) { return t_c + window_len; }
inline double expired_due(double t_c, double window_len) { return t_c + 2.0 * window_len; }

/// Half-open window membership at time now: current (now - |W|, now],
/// past (now - 2|W|, now - |W|]. Expressed through the due times so that
/// replayed event state and a from-scratch recount agree exactly.
std::optional<Phase> window_phase(double t_c, double now, double window_len);

struct BurstResult {
    Box region;
    Point point;
    double score = 0.0;
    double t = 0.0;
    int rank = 1;
    bool placed = false;
};

struct TopKResult {
    double t = 0.0;
    std::vector<BurstResult> regions;
};

/// Grid cell coordinates.
struct CellId {
    std::int64_t i = 0;
    std::int64_t j = 0;

    friend auto operator<=>(const CellId&, const CellId&) = default;
};

struct CellIdHash {
    std::size_t operator()(const CellId& c) const noexcept {
        auto h = static_cast<std::uint64_t>(c.i) * 0x9E3779B97F4A7C15ull;
        h ^= static_cast<std::uint64_t>(c.j) + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

}  // namespace surge
