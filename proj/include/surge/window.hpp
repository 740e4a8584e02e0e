#pragma once

#include <cstdint>
#include <queue>
#include <span>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "surge/model.hpp"

namespace surge {

/// Declaration order is the same-timestamp processing order.
enum class EventKind : std::uint8_t { Expired = 0, Grown = 1, New = 2 };

std::string_view to_string(EventKind kind);

struct Event {
    RectObject rect;
    EventKind kind = EventKind::New;
    double due = 0.0;
    std::uint64_t seq = 0;
};

/// Strict weak order on (due, kind, seq).
bool event_before(const Event& a, const Event& b);

class StreamOrderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Turns admitted objects into New/Grown/Expired events and releases them in
/// (due, kind, seq) order. Logical time comes from object timestamps.
class EventScheduler {
public:
    explicit EventScheduler(Query q);

    /// Schedules the three lifecycle events of o and returns them. Objects
    /// outside the preferred area produce nothing.
    std::vector<Event> admit(const SpatialObject& o);

    /// Releases every pending event due at or before `to`.
    std::vector<Event> advance(double to);

    /// Releases everything that is still pending.
    std::vector<Event> drain();

    double now() const { return now_; }
    std::size_t pending() const { return pending_.size(); }
    std::uint64_t admitted() const { return admitted_; }
    const Query& query() const { return query_; }

    /// Rectangles currently in W_c or W_p, after the released events.
    const std::unordered_map<std::uint64_t, Phase>& live() const { return live_; }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const { return event_before(b, a); }
    };

    void release(const Event& e);

    Query query_;
    double now_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t admitted_ = 0;
    std::priority_queue<Event, std::vector<Event>, Later> pending_;
    std::unordered_map<std::uint64_t, Phase> live_;
};

/// Replays a time-ordered object list: objects sharing a timestamp are admitted
/// together before the clock advances to it. With drain set, every object
/// also runs through its grown and expired events.
std::vector<Event> replay_events(std::span<const SpatialObject> objects, const Query& q,
                                 bool drain = true);

}  // namespace surge
