#include "surge/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace surge {

Box intersect(const Box& a, const Box& b) {
    return {std::max(a.x_min, b.x_min), std::max(a.y_min, b.y_min),
            std::min(a.x_max, b.x_max), std::min(a.y_max, b.y_max)};
}

void Query::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(width) || !positive(height))
        throw InvalidQuery("region width and height must be positive");
    if (!positive(window_len))
        throw InvalidQuery("window length must be positive");
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw InvalidQuery("alpha must lie in [0, 1), got " + std::to_string(alpha));
    if (k < 1)
        throw InvalidQuery("k must be at least 1");
    if (area) {
        if (area->width() < width || area->height() < height)
            throw InvalidQuery("preferred area is smaller than the query region");
    }
}

std::optional<Box> Query::valid_domain() const {
    if (!area) return std::nullopt;
    return Box{area->x_min + width, area->y_min + height, area->x_max, area->y_max};
}

Point Query::grid_anchor() const {
    if (!area) return {0.0, 0.0};
    return {area->x_min, area->y_min};
}

double window_score(std::span<const double> weights, double window_len) {
    if (!(window_len > 0.0))
        throw std::invalid_argument("window length must be positive");
    return std::accumulate(weights.begin(), weights.end(), 0.0) / window_len;
}

std::optional<RectObject> to_rectangle(const SpatialObject& o, const Query& q) {
    if (q.area && !q.area->contains({o.x, o.y})) return std::nullopt;
    RectObject g;
    g.id = o.id;
    g.w = o.w;
    g.x = o.x;
    g.y = o.y;
    g.x_max = o.x + q.width;
    g.y_max = o.y + q.height;
    g.t_c = o.t_c;
    g.lvl = q.k;
    return g;
}

namespace {

// Smallest double m with fl(m + len) >= v. An object at o lies in the region
// exactly when its rectangle (upper edge fl(o + len)) reaches v, which plain
// v - len gets wrong by an ulp now and then.
double preimage_low(double v, double len) {
    if (!std::isfinite(v)) return v - len;
    const auto reaches = [&](double m) { return m + len >= v; };
    // Bracket with lo failing and hi passing, then bisect down to adjacent doubles.
    double lo = v - len, hi = lo;
    double step = std::ldexp(std::max({std::fabs(v), std::fabs(len), 1.0}), -50);
    if (reaches(hi)) {
        while (reaches(lo)) lo = hi - (step *= 2);
    } else {
        while (!reaches(hi)) hi = lo + (step *= 2);
    }
    for (;;) {
        const double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) break;
        (reaches(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

Box region_from_point(Point p, const Query& q) {
    Box r{preimage_low(p.x, q.width), preimage_low(p.y, q.height), p.x, p.y};
    // Can sit an ulp outside the area; nothing admitted lives there.
    if (q.area) {
        r.x_min = std::max(r.x_min, q.area->x_min);
        r.y_min = std::max(r.y_min, q.area->y_min);
    }
    return r;
}

std::optional<Phase> window_phase(double t_c, double now, double window_len) {
    if (t_c > now) return std::nullopt;
    if (now < grown_due(t_c, window_len)) return Phase::Current;
    if (now < expired_due(t_c, window_len)) return Phase::Past;
    return std::nullopt;
}

}  // namespace surge
