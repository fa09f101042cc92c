#ifndef MPROX_RAN_LINK_HPP
#define MPROX_RAN_LINK_HPP

#include "mprox/delay_pipe.hpp"
#include "mprox/engine.hpp"
#include "mprox/segment.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>

namespace mprox {

/// gNB-side drop-tail buffer with slotted service at the instantaneous
/// channel rate, plus the uplink ACK path back from the UE. Whole segments
/// only: a segment that does not fit the accumulated slot budget keeps
/// waiting (unused budget carries over while it does), and one that does not
/// fit the buffer is dropped entirely.
class RanLink {
public:
    struct Config {
        std::uint64_t capacity_bytes = 10ull << 20;
        SimTime slot_us = 125;
        SimTime prop_delay_us = 0;    // downlink over-the-air delay
        SimTime uplink_delay_us = 125; // fixed ACK-path delay, no queuing
    };

    /// rate_bps(t) is the achievable PHY rate at time t (0 during outage).
    RanLink(Engine& eng, Config cfg, std::function<double(SimTime)> rate_bps);

    /// Begins the self-rescheduling slot service chain.
    void start();

    /// Drop-tail admission; returns false (and counts a drop) when the
    /// segment does not fit the free space.
    bool enqueue(const Segment& s);

    /// Current occupancy B in bytes, as exported to the cross-layer bus.
    std::uint64_t occupancy() const { return occupancy_; }

    /// Full-buffer byte budget of one slot at the given rate.
    std::uint64_t slot_budget_bytes(double rate_bps) const;

    void send_uplink(const Segment& ack) { uplink_.send(ack); }

    /// Downlink delivery at the UE; second argument is the RAN latency
    /// (gNB ingress to UE delivery) of the segment.
    std::function<void(const Segment&, SimTime)> on_deliver;
    /// Uplink delivery at the gNB side (proxy or core-bound relay).
    std::function<void(const Segment&)> on_uplink;

    const Config& config() const { return cfg_; }

    // Counters for byte-conservation and throughput checks.
    std::uint64_t bytes_enqueued() const { return bytes_enqueued_; }
    std::uint64_t bytes_delivered() const { return bytes_delivered_; }
    std::uint64_t bytes_dropped() const { return bytes_dropped_; }
    std::uint64_t drops() const { return drops_; }

    /// Time-averaged occupancy over [0, now).
    double mean_occupancy() const;

private:
    void serve_slot();
    void touch_occupancy();

    Engine& eng_;
    Config cfg_;
    std::function<double(SimTime)> rate_bps_;

    struct Queued {
        Segment seg;
        SimTime enqueued_at;
    };
    std::deque<Queued> queue_;
    std::uint64_t occupancy_ = 0;
    std::uint64_t credit_ = 0; // unspent slot budget while the head waits

    std::uint64_t bytes_enqueued_ = 0;
    std::uint64_t bytes_delivered_ = 0;
    std::uint64_t bytes_dropped_ = 0;
    std::uint64_t drops_ = 0;

    double occupancy_integral_ = 0; // byte-microseconds
    SimTime last_occupancy_change_ = 0;

    DelayPipe uplink_;
};

} // namespace mprox

#endif
