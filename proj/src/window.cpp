#include "surge/window.hpp"

#include <limits>
#include <string>

namespace surge {

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Expired: return "expired";
        case EventKind::Grown: return "grown";
        case EventKind::New: return "new";
    }
    return "unknown";
}

bool event_before(const Event& a, const Event& b) {
    if (a.due != b.due) return a.due < b.due;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.seq < b.seq;
}

EventScheduler::EventScheduler(Query q)
    : query_(std::move(q)), now_(-std::numeric_limits<double>::infinity()) {
    query_.validate();
}

std::vector<Event> EventScheduler::admit(const SpatialObject& o) {
    if (o.t_c < now_) {
        throw StreamOrderError("object " + std::to_string(o.id) + " created at " +
                               std::to_string(o.t_c) + " arrives after time " +
                               std::to_string(now_));
    }
    auto rect = to_rectangle(o, query_);
    if (!rect) return {};

    ++admitted_;
    const double w = query_.window_len;
    std::vector<Event> scheduled{
        {*rect, EventKind::New, o.t_c, next_seq_++},
        {*rect, EventKind::Grown, grown_due(o.t_c, w), next_seq_++},
        {*rect, EventKind::Expired, expired_due(o.t_c, w), next_seq_++},
    };
    for (const auto& e : scheduled) pending_.push(e);
    return scheduled;
}

std::vector<Event> EventScheduler::advance(double to) {
    std::vector<Event> out;
    if (to < now_) return out;
    while (!pending_.empty() && pending_.top().due <= to) {
        out.push_back(pending_.top());
        pending_.pop();
        release(out.back());
    }
    now_ = to;
    return out;
}

std::vector<Event> EventScheduler::drain() {
    std::vector<Event> out;
    double last = now_;
    while (!pending_.empty()) {
        out.push_back(pending_.top());
        pending_.pop();
        release(out.back());
        last = out.back().due;
    }
    now_ = std::max(now_, last);
    return out;
}

void EventScheduler::release(const Event& e) {
    switch (e.kind) {
        case EventKind::New: live_[e.rect.id] = Phase::Current; break;
        case EventKind::Grown: live_[e.rect.id] = Phase::Past; break;
        case EventKind::Expired: live_.erase(e.rect.id); break;
    }
}

std::vector<Event> replay_events(std::span<const SpatialObject> objects, const Query& q,
                                 bool drain) {
    EventScheduler sched(q);
    std::vector<Event> out;
    out.reserve(objects.size() * 3);
    std::size_t i = 0;
    while (i < objects.size()) {
        const double t = objects[i].t_c;
        for (; i < objects.size() && objects[i].t_c == t; ++i) sched.admit(objects[i]);
        auto batch = sched.advance(t);
        out.insert(out.end(), batch.begin(), batch.end());
    }
    if (drain) {
        auto rest = sched.drain();
        out.insert(out.end(), rest.begin(), rest.end());
    }
    return out;
}

}  // namespace surge
