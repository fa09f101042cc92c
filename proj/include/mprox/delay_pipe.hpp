#ifndef MPROX_DELAY_PIPE_HPP
#define MPROX_DELAY_PIPE_HPP

#include "mprox/engine.hpp"
#include "mprox/segment.hpp"

#include <deque>
#include <functional>
#include <utility>
#include <vector>

namespace mprox {

/// Fixed one-way propagation hop: every segment sent at t is delivered to the
/// sink at t + delay, FIFO. Segments sent at the same instant are coalesced
/// into one engine event, which keeps the event count per run proportional to
/// the number of transmission bursts rather than the number of segments.
class DelayPipe {
public:
    DelayPipe(Engine& eng, SimTime delay_us, std::function<void(const Segment&)> sink)
        : eng_(eng), delay_(delay_us), sink_(std::move(sink)) {}

    void send(const Segment& s) {
        const SimTime due = eng_.now() + delay_;
        if (batches_.empty() || batches_.back().due != due) {
            batches_.push_back(Batch{due, {}});
        }
        batches_.back().segs.push_back(s);
        arm();
    }

    std::uint64_t segments_sent() const { return sent_; }

private:
    struct Batch {
        SimTime due;
        std::vector<Segment> segs;
    };

    void arm() {
        if (armed_ || batches_.empty()) {
            return;
        }
        armed_ = true;
        eng_.schedule_at(batches_.front().due, [this] { fire(); });
    }

    void fire() {
        armed_ = false;
        Batch b = std::move(batches_.front());
        batches_.pop_front();
        arm(); // next batch, if any, before sinks run (sinks may send again)
        sent_ += b.segs.size();
        for (const Segment& s : b.segs) {
            sink_(s);
        }
    }

    Engine& eng_;
    SimTime delay_;
    std::function<void(const Segment&)> sink_;
    std::deque<Batch> batches_;
    bool armed_ = false;
    std::uint64_t sent_ = 0;
};

} // namespace mprox

#endif
