#include "mprox/engine.hpp"

#include <stdexcept>

namespace mprox {

Engine::Handle Engine::schedule_at(SimTime fire_at, Action action) {
    if (fire_at < now_) {
        throw std::logic_error("Engine::schedule_at: event scheduled in the past");
    }
    const std::uint64_t id = next_id_++;
    queue_.push(Entry{fire_at, id});
    actions_.emplace(id, std::move(action));
    return Handle{id};
}

bool Engine::cancel(Handle h) {
    return actions_.erase(h.id) > 0;
}

SimTime Engine::run_until(SimTime t_end) {
    while (!queue_.empty() && queue_.top().at <= t_end) {
        const Entry e = queue_.top();
        queue_.pop();
        auto it = actions_.find(e.id);
        if (it == actions_.end()) {
            continue; // cancelled
        }
        now_ = e.at;
        Action act = std::move(it->second);
        actions_.erase(it);
        ++executed_;
        trace_hash_ = (trace_hash_ ^ static_cast<std::uint64_t>(e.at)) * 1099511628211ull;
        trace_hash_ = (trace_hash_ ^ e.id) * 1099511628211ull;
        act();
    }
    if (t_end > now_) {
        now_ = t_end;
    }
    return now_;
}

} // namespace mprox
