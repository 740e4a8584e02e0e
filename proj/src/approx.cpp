#include "surge/approx.hpp"

#include <algorithm>
#include <cmath>

#include "surge/cellindex.hpp"

namespace surge {

GridAggregate::GridAggregate(const Query& q, Point offset) : query_(q), offset_(offset) {
    query_.validate();
    const Point a = q.grid_anchor();
    origin_ = {a.x + offset.x, a.y + offset.y};
}

CellId GridAggregate::cell_of(Point p) const {
    return {static_cast<std::int64_t>(std::floor((p.x - origin_.x) / query_.width)),
            static_cast<std::int64_t>(std::floor((p.y - origin_.y) / query_.height))};
}

Box GridAggregate::cell_box(CellId c) const {
    const double b = query_.width, a = query_.height;
    return {origin_.x + static_cast<double>(c.i) * b, origin_.y + static_cast<double>(c.j) * a,
            origin_.x + static_cast<double>(c.i + 1) * b,
            origin_.y + static_cast<double>(c.j + 1) * a};
}

Box GridAggregate::region_of(CellId c) const {
    Box r = cell_box(c);
    if (!query_.area) return r;
    const Box& A = *query_.area;
    const double dx = r.x_min < A.x_min ? A.x_min - r.x_min : (r.x_max > A.x_max ? A.x_max - r.x_max : 0.0);
    const double dy = r.y_min < A.y_min ? A.y_min - r.y_min : (r.y_max > A.y_max ? A.y_max - r.y_max : 0.0);
    return {r.x_min + dx, r.y_min + dy, r.x_max + dx, r.y_max + dy};
}

void GridAggregate::rescore(CellId id, Record& r, double old_score) {
    order_.erase({-old_score, id});
    r.score = burst_score(r.sums, query_.alpha);
    order_.insert({-r.score, id});
}

void GridAggregate::apply(const Event& e) {
    const CellId id = cell_of({e.rect.x, e.rect.y});
    const double w = e.rect.w;
    auto it = cells_.find(id);
    if (it == cells_.end()) {
        if (e.kind != EventKind::New) return;  // never admitted here
        it = cells_.emplace(id, Record{}).first;
        order_.insert({-0.0, id});
    }
    Record& r = it->second;
    const double old = r.score;
    switch (e.kind) {
        case EventKind::New:
            r.sums.current += w;
            r.weights.push_back(w);
            break;
        case EventKind::Grown:
            r.sums.current -= w;
            r.sums.past += w;
            ++r.n_past;
            break;
        case EventKind::Expired:
            r.sums.past -= w;
            r.weights.pop_front();
            --r.n_past;
            break;
    }
    if (r.weights.empty()) {
        order_.erase({-old, id});
        cells_.erase(it);
        return;
    }
    rescore(id, r, old);
}

std::optional<GridCell> GridAggregate::best() const {
    if (order_.empty()) return std::nullopt;
    return get(order_.begin()->second);
}

std::vector<GridCell> GridAggregate::top(std::size_t n) const {
    std::vector<GridCell> out;
    for (auto it = order_.begin(); it != order_.end() && out.size() < n; ++it)
        out.push_back(*get(it->second));
    return out;
}

std::optional<GridCell> GridAggregate::get(CellId c) const {
    auto it = cells_.find(c);
    if (it == cells_.end()) return std::nullopt;
    return GridCell{c, it->second.sums, it->second.score};
}

std::vector<GridCell> GridAggregate::cells() const {
    std::vector<GridCell> out;
    out.reserve(cells_.size());
    for (const auto& [id, r] : cells_) out.push_back({id, r.sums, r.score});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

void GridAggregate::recount_best() {
    if (order_.empty()) return;
    const CellId id = order_.begin()->second;
    Record& r = cells_.at(id);
    WeightSums s;
    for (std::size_t i = 0; i < r.weights.size(); ++i)
        (i < r.n_past ? s.past : s.current) += r.weights[i];
    const double old = r.score;
    r.sums = s;
    rescore(id, r, old);
}

BurstResult cell_result(const GridAggregate& g, const std::optional<GridCell>& c, const Query& q,
                        double t, int rank) {
    BurstResult r;
    r.t = t;
    r.rank = rank;
    const double score = c ? c->score / q.window_len : 0.0;
    if (c && score > kTolerance) {
        r.region = g.region_of(c->id);
        r.point = {r.region.x_max, r.region.y_max};
        r.score = score;
        r.placed = true;
        return r;
    }
    return to_result(std::nullopt, q, t, rank);
}

namespace {

TopKResult pad(TopKResult res, int k, const Query& q) {
    while (static_cast<int>(res.regions.size()) < k)
        res.regions.push_back(
            to_result(std::nullopt, q, res.t, static_cast<int>(res.regions.size()) + 1));
    return res;
}

}  // namespace

GapSurge::GapSurge(Query q) : query_(q), grid_(q, {0.0, 0.0}) {}

BurstResult GapSurge::on_event(const Event& e) {
    grid_.apply(e);
    if (++events_ % kRecountPeriod == 0) grid_.recount_best();
    return cell_result(grid_, grid_.best(), query_, e.due, 1);
}

TopKResult GapSurge::top_k(int k, double t) const {
    if (k < 1) throw InvalidQuery("k must be at least 1");
    TopKResult res{t, {}};
    int rank = 1;
    for (const auto& c : grid_.top(static_cast<std::size_t>(k))) {
        auto r = cell_result(grid_, c, query_, t, rank);
        if (!r.placed) break;
        res.regions.push_back(r);
        ++rank;
    }
    return pad(std::move(res), k, query_);
}

MGapSurge::MGapSurge(Query q)
    : query_(q),
      grids_{GridAggregate(q, {0.0, 0.0}), GridAggregate(q, {q.width / 2, 0.0}),
             GridAggregate(q, {0.0, q.height / 2}), GridAggregate(q, {q.width / 2, q.height / 2})} {}

BurstResult MGapSurge::best_result(double t) const {
    std::size_t bg = 0;
    std::optional<GridCell> bc;
    for (std::size_t g = 0; g < grids_.size(); ++g) {
        auto c = grids_[g].best();
        if (c && (!bc || c->score > bc->score)) {
            bc = c;
            bg = g;
        }
    }
    return cell_result(grids_[bg], bc, query_, t, 1);
}

BurstResult MGapSurge::on_event(const Event& e) {
    const bool recount = ++events_ % kRecountPeriod == 0;
    for (auto& g : grids_) {
        g.apply(e);
        if (recount) g.recount_best();
    }
    return best_result(e.due);
}

TopKResult MGapSurge::top_k(int k, double t) const {
    if (k < 1) throw InvalidQuery("k must be at least 1");
    struct Cand {
        double score;
        std::size_t grid;
        GridCell cell;
    };
    std::vector<Cand> pool;
    for (std::size_t g = 0; g < grids_.size(); ++g)
        for (const auto& c : grids_[g].top(4 * static_cast<std::size_t>(k))) pool.push_back({c.score, g, c});
    std::stable_sort(pool.begin(), pool.end(), [](const Cand& a, const Cand& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.grid != b.grid) return a.grid < b.grid;
        return a.cell.id < b.cell.id;
    });

    TopKResult res{t, {}};
    for (const auto& c : pool) {
        if (static_cast<int>(res.regions.size()) == k) break;
        auto r = cell_result(grids_[c.grid], c.cell, query_, t, static_cast<int>(res.regions.size()) + 1);
        if (!r.placed) break;
        const bool clash = std::any_of(res.regions.begin(), res.regions.end(),
                                       [&](const BurstResult& o) { return o.region.overlaps_interior(r.region); });
        if (!clash) res.regions.push_back(r);
    }
    return pad(std::move(res), k, query_);
}

}  // namespace surge
