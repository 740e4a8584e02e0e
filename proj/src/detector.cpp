#include "surge/detector.hpp"

#include <array>
#include <utility>

#include "surge/approx.hpp"
#include "surge/oracle.hpp"
#include "surge/topk.hpp"

namespace surge {

namespace {

constexpr std::array<std::pair<Algo, std::string_view>, 8> kNames{{
    {Algo::Ccs, "ccs"},
    {Algo::Gaps, "gaps"},
    {Algo::Mgaps, "mgaps"},
    {Algo::Kccs, "kccs"},
    {Algo::Kgaps, "kgaps"},
    {Algo::Kmgaps, "kmgaps"},
    {Algo::Oracle, "oracle"},
    {Algo::Naive, "naive"},
}};

TopKResult single(BurstResult r) { return {r.t, {r}}; }

class CcsDetector : public Detector {
public:
    CcsDetector(const Query& q, CellSearchOptions o) : d_(q, o) {}
    TopKResult on_event(const Event& e) override { return single(d_.on_event(e)); }
    std::optional<DetectorStats> stats() const override { return d_.stats(); }

private:
    CellCspot d_;
};

class KccsDetector : public Detector {
public:
    KccsDetector(const Query& q, CellSearchOptions o) : d_(q, o) {}
    TopKResult on_event(const Event& e) override { return d_.on_event(e); }
    std::optional<DetectorStats> stats() const override { return d_.stats(); }

private:
    KCellCspot d_;
};

template <class D>
class SingleDetector : public Detector {
public:
    explicit SingleDetector(const Query& q) : d_(q) {}
    TopKResult on_event(const Event& e) override { return single(d_.on_event(e)); }

private:
    D d_;
};

template <class D>
class TopKDetector : public Detector {
public:
    explicit TopKDetector(const Query& q) : d_(q) {}
    TopKResult on_event(const Event& e) override { return d_.on_event(e); }

private:
    D d_;
};

class OracleDetector : public Detector {
public:
    explicit OracleDetector(const Query& q) : q_(q) {}
    TopKResult on_event(const Event& e) override {
        snap_.apply(e);
        return brute_topk(snap_, q_, q_.k);
    }

private:
    Query q_;
    Snapshot snap_;
};

class NaiveWrapper : public Detector {
public:
    explicit NaiveWrapper(const Query& q) : d_(q) {}
    TopKResult on_event(const Event& e) override { return single(d_.on_event(e)); }
    std::optional<DetectorStats> stats() const override { return d_.stats(); }

private:
    NaiveDetector d_;
};

}  // namespace

std::optional<Algo> parse_algo(std::string_view s) {
    for (const auto& [a, n] : kNames)
        if (n == s) return a;
    return std::nullopt;
}

std::string_view to_string(Algo a) {
    for (const auto& [x, n] : kNames)
        if (x == a) return n;
    return "unknown";
}

std::unique_ptr<Detector> make_detector(Algo a, const Query& q, BoundMode bound_mode) {
    q.validate();
    switch (a) {
        case Algo::Ccs: {
            CellSearchOptions o;
            o.bound_mode = bound_mode;
            return std::make_unique<CcsDetector>(q, o);
        }
        case Algo::Kccs: {
            CellSearchOptions o;
            o.bound_mode = bound_mode;
            return std::make_unique<KccsDetector>(q, o);
        }
        case Algo::Gaps: return std::make_unique<SingleDetector<GapSurge>>(q);
        case Algo::Mgaps: return std::make_unique<SingleDetector<MGapSurge>>(q);
        case Algo::Kgaps: return std::make_unique<TopKDetector<KGapSurge>>(q);
        case Algo::Kmgaps: return std::make_unique<TopKDetector<KMGapSurge>>(q);
        case Algo::Oracle: return std::make_unique<OracleDetector>(q);
        case Algo::Naive: return std::make_unique<NaiveWrapper>(q);
    }
    return nullptr;
}

}  // namespace surge
