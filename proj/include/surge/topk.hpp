#pragma once

#include <optional>
#include <vector>

#include "surge/approx.hpp"
#include "surge/cellindex.hpp"
#include "surge/model.hpp"
#include "surge/window.hpp"

namespace surge {

/// Exact top-k detector over leveled rectangles. Level i holds the
/// rectangles covering the rank-i point and no earlier one; rectangles that
/// cover no reported point sit at level k.
class KCellCspot {
public:
    explicit KCellCspot(Query q, CellSearchOptions opt = {});

    TopKResult on_event(const Event& e);

    const CellIndex& index() const { return index_; }
    /// Reported points by rank; nullopt for unplaced ranks.
    const std::vector<std::optional<Found>>& points() const { return points_; }
    const DetectorStats& stats() const { return stats_; }

private:
    std::vector<Point> placed_points() const;

    Query query_;
    CellIndex index_;
    std::vector<std::optional<Found>> points_;
    DetectorStats stats_;
};

class KGapSurge {
public:
    explicit KGapSurge(Query q);
    TopKResult on_event(const Event& e);

private:
    GapSurge inner_;
    int k_;
};

class KMGapSurge {
public:
    explicit KMGapSurge(Query q);
    TopKResult on_event(const Event& e);

private:
    MGapSurge inner_;
    int k_;
};

}  // namespace surge
