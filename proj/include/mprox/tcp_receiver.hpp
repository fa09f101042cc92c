#ifndef MPROX_TCP_RECEIVER_HPP
#define MPROX_TCP_RECEIVER_HPP

#include "mprox/engine.hpp"
#include "mprox/segment.hpp"

#include <cstdint>
#include <functional>
#include <map>

namespace mprox {

/// Cumulative-ACK TCP receiver with an out-of-order store. One ACK per
/// received segment (no delayed ACKs); every ACK echoes the timestamp of the
/// segment that triggered it and advertises a constant, deliberately large
/// window so the peer's binding constraint stays elsewhere.
class TcpReceiver {
public:
    struct Config {
        std::uint64_t adv_window = 64ull << 20;
    };

    TcpReceiver(Engine& eng, Config cfg, std::function<void(const Segment&)> tx_ack);

    void on_segment(const Segment& s);

    /// Bytes delivered in order (rcv_nxt).
    std::uint64_t delivered() const { return rcv_nxt_; }

    /// Checksum of the delivered in-order prefix. Matches
    /// stream_range_sum(0, delivered()) iff every accepted segment carried
    /// the stream content it claimed.
    std::uint64_t digest() const { return digest_; }

    std::uint64_t acks_sent() const { return acks_sent_; }
    std::uint64_t corrupt_segments() const { return corrupt_segments_; }
    std::uint64_t out_of_order_segments() const { return out_of_order_; }

private:
    void send_ack(SimTime ts_echo);

    Engine& eng_;
    Config cfg_;
    std::function<void(const Segment&)> tx_ack_;

    std::uint64_t rcv_nxt_ = 0;
    std::uint64_t digest_ = 0;
    std::map<std::uint64_t, std::uint64_t> ooo_; // start -> end, disjoint
    SimTime last_ts_val_ = 0;
    std::uint64_t acks_sent_ = 0;
    std::uint64_t corrupt_segments_ = 0;
    std::uint64_t out_of_order_ = 0;
};

} // namespace mprox

#endif
