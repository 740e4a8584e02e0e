#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "surge/model.hpp"
#include "surge/window.hpp"

namespace surge {

/// Aggregate of one grid cell. Sums are raw weights.
struct GridCell {
    CellId id;
    WeightSums sums;
    double score = 0.0;  // raw
};

/// One a x b grid shifted by `offset`, with per-cell window sums and an
/// ordered index over cell scores. Points belong to cells half-open.
class GridAggregate {
public:
    GridAggregate(const Query& q, Point offset);

    /// Applies the window transition of e to the cell containing e's object.
    void apply(const Event& e);

    CellId cell_of(Point p) const;
    Box cell_box(CellId c) const;
    /// Region reported for c: the cell box, shifted inside the area if needed.
    Box region_of(CellId c) const;

    std::optional<GridCell> best() const;
    /// The n best cells by (score desc, id asc).
    std::vector<GridCell> top(std::size_t n) const;
    std::optional<GridCell> get(CellId c) const;
    std::vector<GridCell> cells() const;
    std::size_t size() const { return cells_.size(); }

    /// Recomputes the best cell's sums from its members.
    void recount_best();

    Point offset() const { return offset_; }

private:
    struct Record {
        WeightSums sums;
        double score = 0.0;
        // Members in arrival order: the first n_past are in the past window.
        std::deque<double> weights;
        std::uint32_t n_past = 0;
    };
    using Key = std::pair<double, CellId>;  // (-score, id)

    void rescore(CellId id, Record& r, double old_score);

    Query query_;
    Point offset_;
    Point origin_;
    std::unordered_map<CellId, Record, CellIdHash> cells_;
    std::set<Key> order_;
};

inline constexpr std::uint64_t kRecountPeriod = 1ull << 16;

/// Single-grid approximate detector.
class GapSurge {
public:
    explicit GapSurge(Query q);

    BurstResult on_event(const Event& e);
    TopKResult top_k(int k, double t) const;

    const GridAggregate& grid() const { return grid_; }

private:
    Query query_;
    GridAggregate grid_;
    std::uint64_t events_ = 0;
};

/// Four-grid approximate detector: offsets (0,0), (b/2,0), (0,a/2), (b/2,a/2).
class MGapSurge {
public:
    explicit MGapSurge(Query q);

    BurstResult on_event(const Event& e);
    /// Top-4k cells of every grid merged greedily into k non-overlapping regions.
    TopKResult top_k(int k, double t) const;

    const GridAggregate& grid(std::size_t g) const { return grids_[g]; }

private:
    BurstResult best_result(double t) const;

    Query query_;
    std::array<GridAggregate, 4> grids_;
    std::uint64_t events_ = 0;
};

/// Result for a cell of a grid; score-0 cells become unplaced sentinels.
BurstResult cell_result(const GridAggregate& g, const std::optional<GridCell>& c, const Query& q,
                        double t, int rank);

}  // namespace surge
