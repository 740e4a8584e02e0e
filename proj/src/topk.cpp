#include "surge/topk.hpp"

#include <cstdint>

namespace surge {

KCellCspot::KCellCspot(Query q, CellSearchOptions opt)
    : query_(q), index_(q, q.k, opt), points_(static_cast<std::size_t>(q.k)) {}

std::vector<Point> KCellCspot::placed_points() const {
    std::vector<Point> pts;
    for (const auto& p : points_)
        if (p) pts.push_back(p->point);
    return pts;
}

TopKResult KCellCspot::on_event(const Event& e) {
    const int k = query_.k;
    const std::size_t before = index_.sweeps();
    apply_event(index_, e, k);

    TopKResult res{e.due, {}};
    for (int i = 1; i <= k; ++i) {
        index_.set_share_guard(placed_points());
        auto f = index_.search(i);
        if (f && !(f->score / query_.window_len > kTolerance)) f.reset();

        const auto old = points_[static_cast<std::size_t>(i - 1)];
        points_[static_cast<std::size_t>(i - 1)] = f;

        // Rectangles released by the old rank-i point drop back to level k.
        std::vector<std::uint64_t> ids;
        if (old) {
            index_.for_each_member(old->cell, [&](const RectObject& g, Phase) {
                if (g.lvl == i && !(f && covers(g, f->point))) ids.push_back(g.id);
            });
            for (auto id : ids) index_.set_level(id, k);
        }
        // Rectangles captured by the new point are hidden from later ranks.
        if (f) {
            ids.clear();
            index_.for_each_member(f->cell, [&](const RectObject& g, Phase) {
                if (g.lvl > i && covers(g, f->point)) ids.push_back(g.id);
            });
            for (auto id : ids) index_.set_level(id, i);
        }
        res.regions.push_back(to_result(f, query_, e.due, i));
    }

    ++stats_.events;
    const std::size_t done = index_.sweeps() - before;
    stats_.sweeps += done;
    if (done > 0) ++stats_.triggering_events;
    return res;
}

KGapSurge::KGapSurge(Query q) : inner_(q), k_(q.k) {}

TopKResult KGapSurge::on_event(const Event& e) {
    inner_.on_event(e);
    return inner_.top_k(k_, e.due);
}

KMGapSurge::KMGapSurge(Query q) : inner_(q), k_(q.k) {}

TopKResult KMGapSurge::on_event(const Event& e) {
    inner_.on_event(e);
    return inner_.top_k(k_, e.due);
}

}  // namespace surge
