#ifndef MPROX_PROXY_HPP
#define MPROX_PROXY_HPP

#include "mprox/crosslayer.hpp"
#include "mprox/engine.hpp"
#include "mprox/fw_policy.hpp"
#include "mprox/segment.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

namespace mprox {

/// Timestamp-option RTT estimation at the proxy, shared-clock case.
/// Server data gives the uplink latency (ts_val - ts_echo = data send time
/// minus the send time of the ACK it echoes); UE ACKs give the downlink
/// latency symmetrically. When both are present their sum is an RTT sample
/// and the running minimum is kept, so queuing delay is filtered out.
class RttEstimator {
public:
    void on_server_data(const Segment& s);
    void on_ue_ack(const Segment& a);

    bool available() const { return rtt_min_.has_value(); }
    SimTime rtt_min_us() const { return rtt_min_.value(); }
    std::optional<SimTime> last_uplink_us() const { return uplink_; }
    std::optional<SimTime> last_downlink_us() const { return downlink_; }
    std::optional<SimTime> last_rtt_us() const { return last_rtt_; }

private:
    void combine();

    std::optional<SimTime> uplink_;
    std::optional<SimTime> downlink_;
    std::optional<SimTime> last_rtt_;
    std::optional<SimTime> rtt_min_;
};

/// Per-flow proxy instance: payload buffer keyed by the end-to-end sequence
/// space, MSS aggregation toward the UE, ACK management with upstream
/// fan-out and advertised-window overwrite, and the flow-window policy.
/// End-to-end semantics are preserved: no ACK is relayed upstream beyond
/// what the UE has acknowledged.
class ProxyInstance {
public:
    struct Config {
        std::uint64_t buffer_capacity = 10ull << 20;
        std::uint32_t mss1 = 1400;  // server -> proxy
        std::uint32_t mss2 = 20000; // proxy -> UE
        SimTime flush_timeout_us = 1000;
        PolicyConfig policy{};
    };

    ProxyInstance(Engine& eng, Config cfg,
                  std::function<void(const Segment&)> tx_toward_ue,
                  std::function<void(const Segment&)> tx_toward_server);

    /// Data (or window probe) arriving from the server side.
    void on_server_segment(const Segment& s);

    /// ACK arriving from the UE side.
    void on_ue_ack(const Segment& a);

    /// Cross-layer sample delivery; refreshes the flow window.
    void on_crosslayer(const CrossLayerSample& s);

    std::uint64_t fw() const { return fw_; }
    const RttEstimator& rtt() const { return rtt_; }
    std::uint64_t occupancy() const { return occupancy_; }
    std::uint64_t free_space() const { return cfg_.buffer_capacity - occupancy_; }
    std::uint64_t ue_acked() const { return ue_acked_; }
    std::uint64_t forwarded() const { return forwarded_; }
    std::uint64_t forwarded_bytes() const { return forwarded_bytes_; }
    std::uint64_t highest_upstream_ack() const { return highest_upstream_ack_; }
    std::uint64_t relayed_acks() const { return relayed_acks_; }
    std::uint64_t dup_acks_relayed() const { return dup_acks_relayed_; }
    std::uint64_t drops() const { return drops_; }
    std::uint64_t segments_to_ue() const { return segments_to_ue_; }
    std::uint64_t ue_retransmissions() const { return ue_retransmissions_; }

    struct TraceSample {
        SimTime t;
        std::uint64_t fw;
        SimTime rtt_min_us; // -1 until available
        std::uint64_t buffer_occupancy;
        std::uint64_t forwarded_bytes;
        std::uint64_t relayed_acks;
    };
    std::function<void(const TraceSample&)> on_trace;

private:
    void refresh_window();
    void offer();
    void emit_toward_ue(std::uint32_t len);
    void retransmit_to_ue();
    void send_upstream_ack(std::uint64_t ack_no, SimTime ts_val, SimTime ts_echo);
    void arm_flush();
    void on_flush_fire();
    std::uint64_t in_order_available() const;
    std::uint64_t fw_headroom() const;
    SimTime tail_ts(std::uint64_t end_offset) const;
    void store_range(std::uint64_t begin, std::uint64_t end);
    std::uint64_t new_bytes_in(std::uint64_t begin, std::uint64_t end) const;
    void evict_below(std::uint64_t offset);
    void emit_trace();

    Engine& eng_;
    Config cfg_;
    std::function<void(const Segment&)> tx_ue_;
    std::function<void(const Segment&)> tx_server_;

    std::map<std::uint64_t, std::uint64_t> stored_; // start -> end, disjoint, >= ue_acked_
    std::uint64_t occupancy_ = 0;
    std::map<std::uint64_t, SimTime> seg_tail_ts_; // server segment end -> its ts_val

    std::uint64_t ue_acked_ = 0;
    std::uint64_t forwarded_ = 0;
    std::uint64_t highest_upstream_ack_ = 0;
    SimTime last_ue_tsval_ = 0;
    int ue_dup_count_ = 0;

    RttEstimator rtt_;
    std::optional<CrossLayerSample> info_;
    SimTime info_taken_at_ = 0;
    std::uint64_t fw_ = 0;

    bool flush_armed_ = false;
    Engine::Handle flush_handle_{};

    std::uint64_t forwarded_bytes_ = 0;
    std::uint64_t relayed_acks_ = 0;
    std::uint64_t dup_acks_relayed_ = 0;
    std::uint64_t drops_ = 0;
    std::uint64_t segments_to_ue_ = 0;
    std::uint64_t ue_retransmissions_ = 0;
};

} // namespace mprox

#endif
