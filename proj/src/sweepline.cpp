#include "surge/sweepline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace surge {

namespace {

struct Clipped {
    double x0, y0, x1, y1, w;
    Phase phase;
    std::size_t s_lo = 0, s_hi = 0;  // inclusive slot range
};

// Slots alternate between breakpoints and the open gaps between them:
// slot 2t is the line x = xs[t], slot 2t+1 is (xs[t], xs[t+1]).
class SlotRow {
public:
    explicit SlotRow(std::size_t n) : sums_(n) {}

    void add(const Clipped& r, double sign) {
        for (std::size_t s = r.s_lo; s <= r.s_hi; ++s) {
            if (r.phase == Phase::Current)
                sums_[s].current += sign * r.w;
            else
                sums_[s].past += sign * r.w;
        }
    }
    const WeightSums& at(std::size_t s) const { return sums_[s]; }
    std::size_t size() const { return sums_.size(); }

private:
    std::vector<WeightSums> sums_;
};

}  // namespace

std::optional<SweepResult> sl_cspot(std::span<const SweepRect> rects, const Box& box,
                                    const SweepOptions& opt, SweepStats* stats) {
    if (box.empty()) return std::nullopt;

    std::vector<Clipped> cl;
    cl.reserve(rects.size());
    std::vector<double> xs{box.x_min, box.x_max};
    for (const auto& r : rects) {
        const Box e{r.x_min, r.y_min, r.x_max, r.y_max};
        if (!e.intersects(box)) continue;
        const Box c = intersect(e, box);
        cl.push_back({c.x_min, c.y_min, c.x_max, c.y_max, r.w, r.phase});
        xs.push_back(c.x_min);
        xs.push_back(c.x_max);
    }
    if (cl.empty()) return std::nullopt;

    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    auto x_index = [&](double x) {
        return static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), x) - xs.begin());
    };
    for (auto& c : cl) {
        c.s_lo = 2 * x_index(c.x0);
        c.s_hi = 2 * x_index(c.x1);
    }

    std::vector<double> ys;
    ys.reserve(2 * cl.size());
    for (const auto& c : cl) {
        ys.push_back(c.y0);
        ys.push_back(c.y1);
    }
    std::sort(ys.begin(), ys.end(), std::greater<>());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    std::vector<std::size_t> by_top(cl.size()), by_bottom(cl.size());
    for (std::size_t i = 0; i < cl.size(); ++i) by_top[i] = by_bottom[i] = i;
    std::sort(by_top.begin(), by_top.end(), [&](auto a, auto b) { return cl[a].y1 > cl[b].y1; });
    std::sort(by_bottom.begin(), by_bottom.end(),
              [&](auto a, auto b) { return cl[a].y0 > cl[b].y0; });

    const std::size_t n_slots = 2 * xs.size() - 1;
    SlotRow row(n_slots);
    std::vector<char> active(opt.verify ? cl.size() : 0, 0);

    SweepResult best;
    double best_score = -1.0;
    bool found = false;

    auto slot_x = [&](std::size_t s, double& x) {
        const std::size_t t = s / 2;
        if (s % 2 == 0) {
            x = xs[t];
            return true;
        }
        x = std::nextafter(xs[t], INFINITY);
        return x < xs[t + 1];
    };

    auto evaluate = [&](std::size_t lo, std::size_t hi, double y) {
        for (std::size_t s = lo; s <= hi; ++s) {
            const WeightSums& ws = row.at(s);
            const double sc = burst_score(ws, opt.alpha);
            double x;
            if (!slot_x(s, x)) continue;
            // Visit order is already point_before order.
            if (found && !better_candidate(sc, ws.past, {x, y}, best_score, best.sums.past, best.point, opt.tol))
                continue;
            best = {{x, y}, ws, sc};
            best_score = sc;
            found = true;
        }
    };

    auto check = [&]() {
        std::vector<WeightSums> fresh(n_slots);
        for (std::size_t i = 0; i < cl.size(); ++i) {
            if (!active[i]) continue;
            for (std::size_t s = cl[i].s_lo; s <= cl[i].s_hi; ++s)
                (cl[i].phase == Phase::Current ? fresh[s].current : fresh[s].past) += cl[i].w;
        }
        for (std::size_t s = 0; s < n_slots; ++s) {
            const double scale = 1.0 + std::abs(fresh[s].current) + std::abs(fresh[s].past);
            if (std::abs(fresh[s].current - row.at(s).current) > 1e-9 * scale ||
                std::abs(fresh[s].past - row.at(s).past) > 1e-9 * scale)
                throw std::logic_error("sweep slot cache diverged from recount");
        }
        double width = 0.0;
        for (std::size_t t = 0; t + 1 < xs.size(); ++t) width += xs[t + 1] - xs[t];
        if (std::abs(width - box.width()) > 1e-9 * (1.0 + std::abs(box.width())))
            throw std::logic_error("sweep intervals do not tile the box");
        if (xs.size() - 1 > 2 * cl.size() + 1)
            throw std::logic_error("sweep interval count exceeds 2n+1");
    };

    std::size_t ti = 0, bi = 0;
    for (std::size_t k = 0; k < ys.size(); ++k) {
        const double y = ys[k];
        std::size_t lo = n_slots, hi = 0;
        for (; ti < by_top.size() && cl[by_top[ti]].y1 == y; ++ti) {
            const auto& c = cl[by_top[ti]];
            row.add(c, 1.0);
            if (opt.verify) active[by_top[ti]] = 1;
            lo = std::min(lo, c.s_lo);
            hi = std::max(hi, c.s_hi);
        }
        if (opt.verify) check();
        if (lo <= hi) evaluate(lo, hi, y);

        lo = n_slots;
        hi = 0;
        for (; bi < by_bottom.size() && cl[by_bottom[bi]].y0 == y; ++bi) {
            const auto& c = cl[by_bottom[bi]];
            row.add(c, -1.0);
            if (opt.verify) active[by_bottom[bi]] = 0;
            lo = std::min(lo, c.s_lo);
            hi = std::max(hi, c.s_hi);
        }
        if (opt.verify) check();
        if (k + 1 < ys.size() && lo <= hi) {
            const double ym = std::nextafter(y, -INFINITY);
            if (ys[k + 1] < ym) evaluate(lo, hi, ym);
        }
    }

    if (stats) {
        stats->max_open_intervals = std::max(stats->max_open_intervals, xs.size() - 1);
        stats->stops += ys.size();
    }
    return best;
}

std::optional<SweepResult> sl_cspot(std::span<const RectObject> rects, const Query& q,
                                    const Box& box, double now) {
    std::vector<SweepRect> in;
    in.reserve(rects.size());
    for (const auto& g : rects) {
        const auto ph = window_phase(g.t_c, now, q.window_len);
        if (!ph) continue;
        in.push_back({g.x, g.y, g.x_max, g.y_max, g.w, *ph});
    }
    SweepOptions opt;
    opt.alpha = q.alpha;
    opt.tol = kTolerance * q.window_len;
    return sl_cspot(in, box, opt);
}

ScorePair point_score(Point p, std::span<const RectObject> rects, const Query& q, double now) {
    WeightSums s;
    for (const auto& g : rects) {
        if (!covers(g, p)) continue;
        const auto ph = window_phase(g.t_c, now, q.window_len);
        if (!ph) continue;
        (*ph == Phase::Current ? s.current : s.past) += g.w;
    }
    return s.normalized(q.window_len);
}

}  // namespace surge
