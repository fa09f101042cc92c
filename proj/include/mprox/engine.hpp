#ifndef MPROX_ENGINE_HPP
#define MPROX_ENGINE_HPP

#include "mprox/sim_time.hpp"

#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_map>
#include <vector>

namespace mprox {

/// Single-threaded discrete-event loop. Events fire in (time, insertion_id)
/// order, so two events scheduled for the same instant run in the order they
/// were scheduled. One engine instance per simulation run; runs never share
/// state.
class Engine {
public:
    using Action = std::function<void()>;

    struct Handle {
        std::uint64_t id = 0;
    };

    SimTime now() const { return now_; }

    /// Scheduling in the past is a programming error and throws.
    Handle schedule_at(SimTime fire_at, Action action);
    Handle schedule_in(SimTime delay, Action action) { return schedule_at(now_ + delay, std::move(action)); }

    /// Returns true if the event was still pending and is now cancelled.
    bool cancel(Handle h);

    /// Executes every event with fire_at <= t_end, advances the clock to
    /// t_end and returns it. Terminates early only by exhausting the queue
    /// (the clock still ends at t_end).
    SimTime run_until(SimTime t_end);

    std::uint64_t events_executed() const { return executed_; }

    /// Order-sensitive hash of the executed (fire_at, insertion_id) stream.
    /// Two runs with identical config and seed must produce identical hashes.
    std::uint64_t trace_hash() const { return trace_hash_; }

private:
    struct Entry {
        SimTime at;
        std::uint64_t id;
        bool operator>(const Entry& o) const {
            return at != o.at ? at > o.at : id > o.id;
        }
    };

    SimTime now_ = 0;
    std::uint64_t next_id_ = 1;
    std::uint64_t executed_ = 0;
    std::uint64_t trace_hash_ = 1469598103934665603ull;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue_;
    std::unordered_map<std::uint64_t, Action> actions_;
};

} // namespace mprox

#endif
