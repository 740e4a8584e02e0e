#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include "surge/cellindex.hpp"
#include "surge/model.hpp"
#include "surge/window.hpp"

namespace surge {

enum class Algo { Ccs, Gaps, Mgaps, Kccs, Kgaps, Kmgaps, Oracle, Naive };

std::optional<Algo> parse_algo(std::string_view s);
std::string_view to_string(Algo a);

/// Uniform event-driven interface over every detector.
class Detector {
public:
    virtual ~Detector() = default;
    virtual TopKResult on_event(const Event& e) = 0;
    /// Sweep counters for the exact detectors.
    virtual std::optional<DetectorStats> stats() const { return std::nullopt; }
};

/// bound_mode only affects ccs and kccs.
std::unique_ptr<Detector> make_detector(Algo a, const Query& q, BoundMode bound_mode = BoundMode::Both);

}  // namespace surge
