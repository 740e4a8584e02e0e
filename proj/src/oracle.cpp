#include "surge/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "surge/sweepline.hpp"

namespace surge {

Snapshot Snapshot::at(std::span<const SpatialObject> objects, const Query& q, double now) {
    Snapshot s;
    s.now_ = now;
    for (const auto& o : objects) {
        if (q.area && !q.area->contains({o.x, o.y})) continue;
        const auto ph = window_phase(o.t_c, now, q.window_len);
        if (!ph) continue;
        s.pos_[o.id] = s.live_.size();
        s.live_.push_back({o, *ph});
    }
    return s;
}

void Snapshot::apply(const Event& e) {
    now_ = e.due;
    const auto& g = e.rect;
    switch (e.kind) {
        case EventKind::New:
            pos_[g.id] = live_.size();
            live_.push_back({{g.id, g.w, g.x, g.y, g.t_c}, Phase::Current});
            break;
        case EventKind::Grown:
            live_[pos_.at(g.id)].phase = Phase::Past;
            break;
        case EventKind::Expired: {
            const std::size_t i = pos_.at(g.id);
            pos_.erase(g.id);
            if (i + 1 != live_.size()) {
                live_[i] = live_.back();
                pos_[live_[i].object.id] = i;
            }
            live_.pop_back();
            break;
        }
    }
}

WeightSums Snapshot::totals() const {
    WeightSums t;
    for (const auto& l : live_) (l.phase == Phase::Current ? t.current : t.past) += l.object.w;
    return t;
}

namespace {

struct Hit {
    Point point;
    WeightSums sums;
    double score;
};

// Breakpoints plus one double inside each gap between consecutive ones: the
// first one in point_before order (just above the lower end for x, just
// below the upper end for y).
std::vector<double> probes(std::vector<double> v, bool upper) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    std::vector<double> out;
    out.reserve(2 * v.size());
    for (std::size_t t = 0; t < v.size(); ++t) {
        out.push_back(v[t]);
        if (t + 1 < v.size()) {
            const double m = upper ? std::nextafter(v[t + 1], -INFINITY) : std::nextafter(v[t], INFINITY);
            if (v[t] < m && m < v[t + 1]) out.push_back(m);
        }
    }
    return out;
}

// Every face, edge and vertex of the rectangle arrangement gets a probe point.
std::optional<Hit> best_over(const std::vector<const LiveObject*>& objs, const Query& q) {
    if (objs.size() > kOracleLimit)
        throw GuardExceeded("oracle refuses " + std::to_string(objs.size()) +
                            " live objects (limit " + std::to_string(kOracleLimit) + ")");
    const auto dom = q.valid_domain();
    const double b = q.width, a = q.height;
    const double tol = kTolerance * q.window_len;
    auto clip = [](double v, double lo, double hi) { return std::min(std::max(v, lo), hi); };

    std::vector<double> xe;
    for (const auto* l : objs) {
        double x0 = l->object.x, x1 = l->object.x + b;
        if (dom) {
            x0 = clip(x0, dom->x_min, dom->x_max);
            x1 = clip(x1, dom->x_min, dom->x_max);
        }
        xe.push_back(x0);
        xe.push_back(x1);
    }
    if (dom) {
        xe.push_back(dom->x_min);
        xe.push_back(dom->x_max);
    }

    std::optional<Hit> best;
    std::vector<const LiveObject*> col;
    for (double cx : probes(std::move(xe), false)) {
        col.clear();
        for (const auto* l : objs)
            if (l->object.x <= cx && cx <= l->object.x + b) col.push_back(l);
        if (col.empty()) continue;

        std::vector<double> ye;
        for (const auto* l : col) {
            double y0 = l->object.y, y1 = l->object.y + a;
            if (dom) {
                y0 = clip(y0, dom->y_min, dom->y_max);
                y1 = clip(y1, dom->y_min, dom->y_max);
            }
            ye.push_back(y0);
            ye.push_back(y1);
        }
        if (dom) {
            ye.push_back(dom->y_min);
            ye.push_back(dom->y_max);
        }
        for (double cy : probes(std::move(ye), true)) {
            WeightSums s;
            for (const auto* l : col) {
                if (l->object.y <= cy && cy <= l->object.y + a)
                    (l->phase == Phase::Current ? s.current : s.past) += l->object.w;
            }
            const double sc = burst_score(s, q.alpha);
            if (!best || better_candidate(sc, s.past, {cx, cy}, best->score, best->sums.past, best->point, tol))
                best = Hit{{cx, cy}, s, sc};
        }
    }
    return best;
}

BurstResult hit_result(const std::optional<Hit>& h, const Query& q, double t, int rank) {
    if (!h) return to_result(std::nullopt, q, t, rank);
    return to_result(Found{h->point, h->sums, h->score, {}}, q, t, rank);
}

std::vector<const LiveObject*> all_of(const Snapshot& s) {
    std::vector<const LiveObject*> v;
    v.reserve(s.size());
    for (const auto& l : s.live()) v.push_back(&l);
    return v;
}

}  // namespace

BurstResult brute_best(const Snapshot& s, const Query& q) {
    return hit_result(best_over(all_of(s), q), q, s.now(), 1);
}

TopKResult brute_topk(const Snapshot& s, const Query& q, int k) {
    if (k < 1) throw InvalidQuery("k must be at least 1");
    auto rest = all_of(s);
    TopKResult res{s.now(), {}};
    for (int i = 1; i <= k; ++i) {
        const auto h = best_over(rest, q);
        const BurstResult r = hit_result(h, q, s.now(), i);
        res.regions.push_back(r);
        if (!r.placed) continue;
        // Same comparison as rectangle coverage, so boundary objects agree
        // with the detectors bit for bit.
        const Point p = h->point;
        std::erase_if(rest, [&](const LiveObject* l) {
            const auto& o = l->object;
            return o.x <= p.x && p.x <= o.x + q.width && o.y <= p.y && p.y <= o.y + q.height;
        });
    }
    return res;
}

double region_score(const Snapshot& s, const Box& r, const Query& q) {
    WeightSums t;
    for (const auto& l : s.live()) {
        if (r.contains({l.object.x, l.object.y}))
            (l.phase == Phase::Current ? t.current : t.past) += l.object.w;
    }
    return burst_score(t.normalized(q.window_len), q.alpha);
}

NaiveDetector::NaiveDetector(Query q) : inner_(q, [] {
    CellSearchOptions o;
    o.bound_mode = BoundMode::None;
    return o;
}()) {}

}  // namespace surge
