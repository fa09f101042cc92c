#include "mprox/ran_link.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace mprox {

RanLink::RanLink(Engine& eng, Config cfg, std::function<double(SimTime)> rate_bps)
    : eng_(eng),
      cfg_(cfg),
      rate_bps_(std::move(rate_bps)),
      uplink_(eng, cfg.uplink_delay_us, [this](const Segment& s) {
          if (on_uplink) on_uplink(s);
      }) {}

void RanLink::start() {
    eng_.schedule_in(cfg_.slot_us, [this] { serve_slot(); });
}

std::uint64_t RanLink::slot_budget_bytes(double rate_bps) const {
    return static_cast<std::uint64_t>(std::floor(rate_bps * static_cast<double>(cfg_.slot_us) / 8e6));
}

void RanLink::touch_occupancy() {
    const SimTime now = eng_.now();
    occupancy_integral_ += static_cast<double>(occupancy_) * static_cast<double>(now - last_occupancy_change_);
    last_occupancy_change_ = now;
}

bool RanLink::enqueue(const Segment& s) {
    if (s.len > cfg_.capacity_bytes - occupancy_) {
        bytes_dropped_ += s.len;
        ++drops_;
        return false;
    }
    touch_occupancy();
    queue_.push_back(Queued{s, eng_.now()});
    occupancy_ += s.len;
    bytes_enqueued_ += s.len;
    return true;
}

void RanLink::serve_slot() {
    eng_.schedule_in(cfg_.slot_us, [this] { serve_slot(); });

    if (queue_.empty()) {
        credit_ = 0; // no hoarding across idle periods
        return;
    }
    // Unused budget carries over while a segment waits, so a segment larger
    // than one slot's budget still drains over several slots.
    credit_ += slot_budget_bytes(rate_bps_(eng_.now()));
    std::vector<Queued> served;
    while (!queue_.empty() && queue_.front().seg.len <= credit_) {
        served.push_back(queue_.front());
        credit_ -= queue_.front().seg.len;
        queue_.pop_front();
    }
    if (queue_.empty()) {
        credit_ = 0;
    }
    if (served.empty()) {
        return;
    }
    touch_occupancy();
    for (const Queued& q : served) {
        occupancy_ -= q.seg.len;
    }
    if (cfg_.prop_delay_us == 0) {
        const SimTime now = eng_.now();
        for (const Queued& q : served) {
            bytes_delivered_ += q.seg.len;
            if (on_deliver) on_deliver(q.seg, now - q.enqueued_at);
        }
    } else {
        eng_.schedule_in(cfg_.prop_delay_us, [this, batch = std::move(served)] {
            const SimTime now = eng_.now();
            for (const Queued& q : batch) {
                bytes_delivered_ += q.seg.len;
                if (on_deliver) on_deliver(q.seg, now - q.enqueued_at);
            }
        });
    }
}

double RanLink::mean_occupancy() const {
    const SimTime now = eng_.now();
    if (now == 0) {
        return static_cast<double>(occupancy_);
    }
    const double integral = occupancy_integral_ +
        static_cast<double>(occupancy_) * static_cast<double>(now - last_occupancy_change_);
    return integral / static_cast<double>(now);
}

} // namespace mprox
