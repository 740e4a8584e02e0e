#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "surge/model.hpp"
#include "surge/sweepline.hpp"
#include "surge/window.hpp"

namespace surge {

enum class BoundMode : std::uint8_t {
    Both,        // min(U_s, U_d)
    StaticOnly,  // U_s only
    None,        // re-sweep every touched cell on every event
};

struct CellSearchOptions {
    BoundMode bound_mode = BoundMode::Both;
    /// false re-sweeps every touched cell on every event regardless of mode.
    bool lazy = true;
    /// false invalidates a cell's candidate whenever a rectangle touching the
    /// cell changes.
    bool candidate_shortcut = true;
    /// Copy a fresh sweep to every level when no rectangle of the cell
    /// covers a reported point. Only meaningful with more than one level.
    bool sharing = true;
    /// Run the sweep with its internal consistency checks.
    bool verify_sweeps = false;
};

struct Candidate {
    Point point;
    WeightSums sums;
    double score = 0.0;  // raw
    bool has = false;    // false: nothing visible at this level
    bool valid = false;
};

/// Read-only view of one cell at one level. Scores are raw (not divided by |W|).
struct CellView {
    CellId id;
    Box bounds;
    Box search;
    std::size_t members = 0;
    double u_s = 0.0;
    double u_d = 0.0;
    Candidate candidate;
};

struct Found {
    Point point;
    WeightSums sums;
    double score = 0.0;  // raw
    CellId cell;
};

/// Grid of a x b cells over rectangle objects with per-level bounds and
/// cached candidates. Level l sees the rectangles with lvl >= l.
class CellIndex {
public:
    CellIndex(const Query& q, int levels, CellSearchOptions opt);

    /// Registers a new current rectangle visible at levels 1..lvl.
    void insert(const RectObject& g, int lvl);
    /// Current -> past.
    void grow(std::uint64_t id);
    /// Past -> gone.
    void expire(std::uint64_t id);
    /// Moves a live rectangle to another level.
    void set_level(std::uint64_t id, int lvl);

    /// Best point at level l (1-based), or nullopt when nothing is visible.
    std::optional<Found> search(int level);

    /// Points checked by the sharing rule: a cell whose rectangles cover none
    /// of them copies its sweep to all levels.
    void set_share_guard(std::vector<Point> pts) { guard_ = std::move(pts); }

    /// Cells touched by a rectangle extent (closed intersection with the
    /// cell's search box).
    std::vector<CellId> affected_cells(const Box& extent) const;

    Box cell_bounds(CellId c) const;

    const RectObject* find(std::uint64_t id) const;
    std::optional<Phase> phase(std::uint64_t id) const;

    /// Visits every live rectangle in cell c.
    template <class Fn>
    void for_each_member(CellId c, Fn&& fn) const {
        auto it = cells_.find(c);
        if (it == cells_.end()) return;
        for (auto s : it->second.members) fn(slab_[s].rect, slab_[s].phase);
    }

    std::vector<CellId> cell_ids() const;
    std::optional<CellView> view(CellId c, int level) const;
    /// Sweeps cell c at level without touching cached state.
    std::optional<SweepResult> forced_sweep(CellId c, int level) const;

    std::size_t sweeps() const { return sweeps_; }
    std::size_t cell_count() const { return cells_.size(); }
    std::size_t live_count() const { return by_id_.size(); }
    int levels() const { return levels_; }
    const Query& query() const { return query_; }
    const CellSearchOptions& options() const { return opt_; }

private:
    struct Slot {
        RectObject rect;
        Phase phase = Phase::Current;
        bool used = false;
    };
    struct Level {
        double u_d = 0.0;
        Candidate cand;
        std::uint64_t stamp = 0;
        bool dirty = false;  // pending eager sweep
    };
    struct Cell {
        CellId id;
        Box search;
        std::vector<std::uint32_t> members;
        double u_s = 0.0;
        std::vector<Level> lv;
    };
    struct HeapEntry {
        double key;
        CellId id;
        std::uint64_t stamp;
    };
    struct HeapLess {
        bool operator()(const HeapEntry& a, const HeapEntry& b) const {
            if (a.key != b.key) return a.key < b.key;
            return b.id < a.id;
        }
    };
    enum class Delta : std::uint8_t { AddCurrent, AddPast, RemoveCurrent, RemovePast, CurrentToPast };

    bool eager() const { return !opt_.lazy || opt_.bound_mode == BoundMode::None; }
    double key(const Cell& c, int l) const;
    void push(Cell& c, int l);
    void rebuild_heap(int l);
    void apply(Cell& c, const Slot& s, Delta d, int l);
    void sweep(Cell& c, int l);
    std::vector<SweepRect> gather(const Cell& c, int l) const;
    Cell& cell(CellId id);
    std::uint32_t slot_of(std::uint64_t id) const;

    Query query_;
    int levels_;
    CellSearchOptions opt_;
    SweepOptions sweep_opt_;
    double tol_;  // raw-score tolerance
    Point anchor_;
    std::optional<Box> domain_;

    std::vector<Slot> slab_;
    std::vector<std::uint32_t> free_;
    std::unordered_map<std::uint64_t, std::uint32_t> by_id_;
    std::unordered_map<CellId, Cell, CellIdHash> cells_;
    std::vector<std::vector<HeapEntry>> heaps_;
    std::vector<std::vector<CellId>> dirty_;  // eager mode: cells awaiting a sweep
    std::vector<std::size_t> visible_;  // live rectangles with lvl >= l
    std::vector<Point> guard_;
    std::uint64_t next_stamp_ = 1;
    std::size_t sweeps_ = 0;
};

struct DetectorStats {
    std::uint64_t events = 0;
    std::uint64_t sweeps = 0;
    std::uint64_t triggering_events = 0;  // events that caused at least one sweep

    double trigger_ratio() const {
        return events ? static_cast<double>(triggering_events) / static_cast<double>(events) : 0.0;
    }
};

/// Exact continuous detector over the event stream.
class CellCspot {
public:
    explicit CellCspot(Query q, CellSearchOptions opt = {});

    BurstResult on_event(const Event& e);

    const CellIndex& index() const { return index_; }
    CellIndex& index() { return index_; }
    const DetectorStats& stats() const { return stats_; }

private:
    Query query_;
    CellIndex index_;
    DetectorStats stats_;
};

/// Applies the window transition of e to an index: New inserts at `lvl`.
void apply_event(CellIndex& index, const Event& e, int lvl);

/// Converts a search hit into a reported region.
BurstResult to_result(const std::optional<Found>& f, const Query& q, double t, int rank);

}  // namespace surge
