#include "surge/cellindex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace surge {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

CellIndex::CellIndex(const Query& q, int levels, CellSearchOptions opt)
    : query_(q), levels_(levels), opt_(opt) {
    query_.validate();
    if (levels < 1) throw InvalidQuery("level count must be at least 1");
    sweep_opt_.alpha = q.alpha;
    tol_ = kTolerance * q.window_len;
    sweep_opt_.tol = tol_;
    sweep_opt_.verify = opt.verify_sweeps;
    anchor_ = q.grid_anchor();
    domain_ = q.valid_domain();
    heaps_.resize(static_cast<std::size_t>(levels));
    dirty_.resize(static_cast<std::size_t>(levels));
    visible_.assign(static_cast<std::size_t>(levels), 0);
}

Box CellIndex::cell_bounds(CellId c) const {
    const double b = query_.width, a = query_.height;
    return {anchor_.x + static_cast<double>(c.i) * b, anchor_.y + static_cast<double>(c.j) * a,
            anchor_.x + static_cast<double>(c.i + 1) * b,
            anchor_.y + static_cast<double>(c.j + 1) * a};
}

std::vector<CellId> CellIndex::affected_cells(const Box& extent) const {
    const double b = query_.width, a = query_.height;
    const auto i0 = static_cast<std::int64_t>(std::floor((extent.x_min - anchor_.x) / b)) - 1;
    const auto i1 = static_cast<std::int64_t>(std::floor((extent.x_max - anchor_.x) / b)) + 1;
    const auto j0 = static_cast<std::int64_t>(std::floor((extent.y_min - anchor_.y) / a)) - 1;
    const auto j1 = static_cast<std::int64_t>(std::floor((extent.y_max - anchor_.y) / a)) + 1;
    std::vector<CellId> out;
    for (auto i = i0; i <= i1; ++i) {
        for (auto j = j0; j <= j1; ++j) {
            Box s = cell_bounds({i, j});
            if (domain_) s = intersect(s, *domain_);
            if (!s.empty() && s.intersects(extent)) out.push_back({i, j});
        }
    }
    return out;
}

CellIndex::Cell& CellIndex::cell(CellId id) {
    auto it = cells_.find(id);
    if (it != cells_.end()) return it->second;
    Cell c;
    c.id = id;
    c.search = cell_bounds(id);
    if (domain_) c.search = intersect(c.search, *domain_);
    c.lv.resize(static_cast<std::size_t>(levels_));
    for (auto& l : c.lv) l.u_d = kInf;
    return cells_.emplace(id, std::move(c)).first->second;
}

std::uint32_t CellIndex::slot_of(std::uint64_t id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end())
        throw std::out_of_range("rectangle " + std::to_string(id) + " is not live");
    return it->second;
}

const RectObject* CellIndex::find(std::uint64_t id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &slab_[it->second].rect;
}

std::optional<Phase> CellIndex::phase(std::uint64_t id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return slab_[it->second].phase;
}

double CellIndex::key(const Cell& c, int l) const {
    const Level& L = c.lv[static_cast<std::size_t>(l - 1)];
    switch (opt_.bound_mode) {
        case BoundMode::Both: return std::min(c.u_s, L.u_d);
        case BoundMode::StaticOnly: return c.u_s;
        case BoundMode::None: return L.u_d;
    }
    return L.u_d;
}

void CellIndex::push(Cell& c, int l) {
    Level& L = c.lv[static_cast<std::size_t>(l - 1)];
    L.stamp = next_stamp_++;
    auto& h = heaps_[static_cast<std::size_t>(l - 1)];
    h.push_back({key(c, l), c.id, L.stamp});
    std::push_heap(h.begin(), h.end(), HeapLess{});
    if (h.size() > 4 * cells_.size() + 64) rebuild_heap(l);
}

void CellIndex::rebuild_heap(int l) {
    auto& h = heaps_[static_cast<std::size_t>(l - 1)];
    h.clear();
    for (auto& [id, c] : cells_) {
        Level& L = c.lv[static_cast<std::size_t>(l - 1)];
        L.stamp = next_stamp_++;
        h.push_back({key(c, l), id, L.stamp});
    }
    std::make_heap(h.begin(), h.end(), HeapLess{});
}

void CellIndex::apply(Cell& c, const Slot& s, Delta d, int l) {
    Level& L = c.lv[static_cast<std::size_t>(l - 1)];
    const double w = s.rect.w;
    if (d == Delta::AddCurrent) L.u_d += w;
    if (d == Delta::RemovePast) L.u_d += query_.alpha * w;

    if (L.cand.valid) {
        bool keep = false;
        if (opt_.candidate_shortcut && L.cand.has) {
            const bool cov = covers(s.rect, L.cand.point);
            if (d == Delta::AddCurrent || d == Delta::RemovePast) {
                // A covered maximizer with f_c >= f_p gains the full delta,
                // which no other point of the cell can exceed.
                keep = cov && L.cand.sums.current - L.cand.sums.past >= 0.0;
                if (keep) {
                    if (d == Delta::AddCurrent)
                        L.cand.sums.current += w;
                    else
                        L.cand.sums.past -= w;
                    L.cand.score = burst_score(L.cand.sums, query_.alpha);
                }
            } else {
                // Pure losses: the maximizer survives when it lost nothing.
                keep = !cov;
            }
        }
        if (keep)
            L.u_d = L.cand.score;
        else
            L.cand.valid = false;
    }
    if (eager() && !L.dirty) {
        L.dirty = true;
        dirty_[static_cast<std::size_t>(l - 1)].push_back(c.id);
    }
    push(c, l);
}

void CellIndex::insert(const RectObject& g, int lvl) {
    if (lvl < 1 || lvl > levels_) throw std::out_of_range("level out of range");
    if (by_id_.count(g.id))
        throw std::invalid_argument("rectangle " + std::to_string(g.id) + " is already live");
    std::uint32_t s;
    if (!free_.empty()) {
        s = free_.back();
        free_.pop_back();
    } else {
        s = static_cast<std::uint32_t>(slab_.size());
        slab_.emplace_back();
    }
    Slot& slot = slab_[s];
    slot.rect = g;
    slot.rect.lvl = lvl;
    slot.phase = Phase::Current;
    slot.used = true;
    by_id_[g.id] = s;
    for (int l = 1; l <= lvl; ++l) ++visible_[static_cast<std::size_t>(l - 1)];

    for (CellId id : affected_cells(g.extent())) {
        Cell& c = cell(id);
        c.members.push_back(s);
        c.u_s += g.w;
        for (int l = 1; l <= lvl; ++l) apply(c, slot, Delta::AddCurrent, l);
    }
}

void CellIndex::grow(std::uint64_t id) {
    const std::uint32_t s = slot_of(id);
    Slot& slot = slab_[s];
    if (slot.phase == Phase::Past) return;
    for (CellId cid : affected_cells(slot.rect.extent())) {
        Cell& c = cells_.at(cid);
        c.u_s -= slot.rect.w;
        for (int l = 1; l <= slot.rect.lvl; ++l) apply(c, slot, Delta::CurrentToPast, l);
    }
    slot.phase = Phase::Past;
}

void CellIndex::expire(std::uint64_t id) {
    const std::uint32_t s = slot_of(id);
    if (slab_[s].phase == Phase::Current) grow(id);
    Slot& slot = slab_[s];
    for (CellId cid : affected_cells(slot.rect.extent())) {
        Cell& c = cells_.at(cid);
        for (int l = 1; l <= slot.rect.lvl; ++l) apply(c, slot, Delta::RemovePast, l);
        auto& m = c.members;
        m.erase(std::find(m.begin(), m.end(), s));
        if (m.empty()) cells_.erase(cid);
    }
    for (int l = 1; l <= slot.rect.lvl; ++l) --visible_[static_cast<std::size_t>(l - 1)];
    slot.used = false;
    by_id_.erase(id);
    free_.push_back(s);
}

void CellIndex::set_level(std::uint64_t id, int lvl) {
    if (lvl < 1 || lvl > levels_) throw std::out_of_range("level out of range");
    const std::uint32_t s = slot_of(id);
    Slot& slot = slab_[s];
    const int old = slot.rect.lvl;
    if (lvl == old) return;
    const bool cur = slot.phase == Phase::Current;
    const Delta d = lvl > old ? (cur ? Delta::AddCurrent : Delta::AddPast)
                              : (cur ? Delta::RemoveCurrent : Delta::RemovePast);
    const int lo = std::min(old, lvl) + 1, hi = std::max(old, lvl);
    for (CellId cid : affected_cells(slot.rect.extent())) {
        Cell& c = cells_.at(cid);
        for (int l = lo; l <= hi; ++l) apply(c, slot, d, l);
    }
    for (int l = lo; l <= hi; ++l) {
        if (lvl > old)
            ++visible_[static_cast<std::size_t>(l - 1)];
        else
            --visible_[static_cast<std::size_t>(l - 1)];
    }
    slot.rect.lvl = lvl;
}

std::vector<SweepRect> CellIndex::gather(const Cell& c, int l) const {
    std::vector<SweepRect> rs;
    rs.reserve(c.members.size());
    for (auto s : c.members) {
        const Slot& slot = slab_[s];
        if (slot.rect.lvl < l) continue;
        const RectObject& g = slot.rect;
        rs.push_back({g.x, g.y, g.x_max, g.y_max, g.w, slot.phase});
    }
    return rs;
}

void CellIndex::sweep(Cell& c, int l) {
    const auto rs = gather(c, l);
    const auto res = sl_cspot(rs, c.search, sweep_opt_);
    ++sweeps_;
    Level& L = c.lv[static_cast<std::size_t>(l - 1)];
    L.dirty = false;
    L.cand.valid = true;
    L.cand.has = res.has_value();
    if (res) {
        L.cand.point = res->point;
        L.cand.sums = res->sums;
        L.cand.score = res->score;
        L.u_d = res->score;
    } else {
        L.cand.sums = {};
        L.cand.score = 0.0;
        L.u_d = 0.0;
    }

    if (levels_ == 1 || !opt_.sharing) return;
    for (auto s : c.members) {
        for (const Point& p : guard_) {
            if (covers(slab_[s].rect, p)) return;
        }
    }
    const Candidate cand = L.cand;
    const double u_d = L.u_d;
    for (int m = 1; m <= levels_; ++m) {
        if (m == l) continue;
        Level& M = c.lv[static_cast<std::size_t>(m - 1)];
        M.cand = cand;
        M.u_d = u_d;
        M.dirty = false;
        push(c, m);
    }
}

std::optional<Found> CellIndex::search(int level) {
    if (level < 1 || level > levels_) throw std::out_of_range("level out of range");
    const auto li = static_cast<std::size_t>(level - 1);

    if (eager()) {
        auto dirty = std::move(dirty_[li]);
        dirty_[li].clear();
        std::sort(dirty.begin(), dirty.end());
        for (CellId id : dirty) {
            auto it = cells_.find(id);
            if (it == cells_.end() || !it->second.lv[li].dirty) continue;
            sweep(it->second, level);
            push(it->second, level);
        }
    }
    if (visible_[li] == 0) return std::nullopt;

    auto& h = heaps_[li];
    std::optional<Found> best;
    std::vector<CellId> popped;
    while (!h.empty()) {
        const HeapEntry top = h.front();
        auto it = cells_.find(top.id);
        if (it == cells_.end() || it->second.lv[li].stamp != top.stamp) {
            std::pop_heap(h.begin(), h.end(), HeapLess{});
            h.pop_back();
            continue;
        }
        if (best) {
            // Cells tying the best may still hold a point earlier in point_before order.
            if (top.key < best->score - tol_) break;
        }
        std::pop_heap(h.begin(), h.end(), HeapLess{});
        h.pop_back();
        Cell& c = it->second;
        popped.push_back(c.id);
        if (!c.lv[li].cand.valid) sweep(c, level);
        const Candidate& cd = c.lv[li].cand;
        if (!cd.has) continue;
        if (!best ||
            better_candidate(cd.score, cd.sums.past, cd.point, best->score, best->sums.past, best->point, tol_))
            best = Found{cd.point, cd.sums, cd.score, c.id};
    }
    for (CellId id : popped) {
        auto it = cells_.find(id);
        if (it != cells_.end()) push(it->second, level);
    }
    return best;
}

std::vector<CellId> CellIndex::cell_ids() const {
    std::vector<CellId> ids;
    ids.reserve(cells_.size());
    for (const auto& [id, c] : cells_) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::optional<CellView> CellIndex::view(CellId id, int level) const {
    auto it = cells_.find(id);
    if (it == cells_.end() || level < 1 || level > levels_) return std::nullopt;
    const Cell& c = it->second;
    const Level& L = c.lv[static_cast<std::size_t>(level - 1)];
    return CellView{id, cell_bounds(id), c.search, c.members.size(), c.u_s, L.u_d, L.cand};
}

std::optional<SweepResult> CellIndex::forced_sweep(CellId id, int level) const {
    auto it = cells_.find(id);
    if (it == cells_.end()) return std::nullopt;
    const auto rs = gather(it->second, level);
    return sl_cspot(rs, it->second.search, sweep_opt_);
}

void apply_event(CellIndex& index, const Event& e, int lvl) {
    switch (e.kind) {
        case EventKind::New: index.insert(e.rect, lvl); break;
        case EventKind::Grown: index.grow(e.rect.id); break;
        case EventKind::Expired: index.expire(e.rect.id); break;
    }
}

BurstResult to_result(const std::optional<Found>& f, const Query& q, double t, int rank) {
    BurstResult r;
    r.t = t;
    r.rank = rank;
    const double score = f ? f->score / q.window_len : 0.0;
    if (f && score > kTolerance) {
        r.point = f->point;
        r.region = region_from_point(f->point, q);
        r.score = score;
        r.placed = true;
        return r;
    }
    // Sentinel: the first admissible region at the grid anchor.
    const Point a = q.grid_anchor();
    r.point = {a.x + q.width, a.y + q.height};
    r.region = region_from_point(r.point, q);
    r.score = 0.0;
    r.placed = false;
    return r;
}

CellCspot::CellCspot(Query q, CellSearchOptions opt) : query_(q), index_(q, 1, opt) {}

BurstResult CellCspot::on_event(const Event& e) {
    const std::size_t before = index_.sweeps();
    apply_event(index_, e, 1);
    const auto f = index_.search(1);
    ++stats_.events;
    const std::size_t done = index_.sweeps() - before;
    stats_.sweeps += done;
    if (done > 0) ++stats_.triggering_events;
    return to_result(f, query_, e.due, 1);
}

}  // namespace surge
