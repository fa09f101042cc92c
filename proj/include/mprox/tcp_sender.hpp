#ifndef MPROX_TCP_SENDER_HPP
#define MPROX_TCP_SENDER_HPP

#include "mprox/engine.hpp"
#include "mprox/segment.hpp"

#include <cstdint>
#include <functional>

namespace mprox {

enum class TcpPhase { SlowStart, CongestionAvoidance, FastRecovery };

const char* to_string(TcpPhase p);

/// TCP NewReno bulk-data sender. New data is gated by min(cwnd, awnd) where
/// awnd is the advertised window of the most recent ACK; three duplicate ACKs
/// trigger fast retransmit/recovery with NewReno partial-ACK handling, and a
/// retransmission timeout falls back to slow start with go-back-N (snd_nxt is
/// pulled back to snd_una, so everything unacknowledged is resent).
class NewRenoSender {
public:
    struct Config {
        std::uint32_t mss = 1400;
        std::uint64_t total_bytes = 1ull << 50; // effectively unbounded
        std::uint32_t initial_cwnd_segments = 10;
        std::uint64_t initial_awnd = 64ull << 20; // pre-handshake stand-in
        SimTime min_rto_us = 200'000;
        SimTime initial_rto_us = 1'000'000;
        SimTime max_rto_us = 60'000'000;
        SimTime persist_interval_us = 200'000;
    };

    struct TraceSample {
        SimTime t;
        std::uint64_t cwnd;
        std::uint64_t awnd;
        std::uint64_t in_flight;
        TcpPhase phase;
    };

    NewRenoSender(Engine& eng, Config cfg, std::function<void(const Segment&)> tx);

    /// Sends the initial window.
    void start();

    void on_ack(const Segment& ack);

    std::uint64_t cwnd() const { return cwnd_; }
    std::uint64_t ssthresh() const { return ssthresh_; }
    std::uint64_t awnd_seen() const { return awnd_seen_; }
    std::uint64_t snd_una() const { return snd_una_; }
    std::uint64_t snd_nxt() const { return snd_nxt_; }
    std::uint64_t in_flight() const { return snd_nxt_ - snd_una_; }
    TcpPhase phase() const { return phase_; }
    bool complete() const { return snd_una_ >= cfg_.total_bytes; }

    SimTime srtt_us() const { return srtt_; }
    SimTime rto_us() const { return rto_; }

    std::uint64_t rto_count() const { return rto_count_; }
    std::uint64_t fast_retransmits() const { return fast_retransmits_; }
    std::uint64_t segments_sent() const { return segments_sent_; }
    std::uint64_t discarded_acks() const { return discarded_acks_; }
    bool persist_armed() const { return persist_armed_; }

    /// Times a freshly transmitted new-data segment left in_flight above
    /// min(cwnd, awnd). Zero in any correct run.
    std::uint64_t clamp_violations() const { return clamp_violations_; }

    /// Invoked after every processed ACK (the per-ACK sender trace).
    std::function<void(const TraceSample&)> on_trace;

private:
    void try_send();
    void transmit(std::uint64_t seq, std::uint32_t len);
    void retransmit_una();
    void rtt_sample(SimTime sample);
    void arm_rto();
    void cancel_rto();
    void on_rto_fire();
    void arm_persist();
    void cancel_persist();
    void on_persist_fire();
    void emit_trace();

    Engine& eng_;
    Config cfg_;
    std::function<void(const Segment&)> tx_;

    std::uint64_t snd_una_ = 0;
    std::uint64_t snd_nxt_ = 0;
    std::uint64_t snd_max_ = 0; // highest byte ever sent, survives go-back-N
    std::uint64_t cwnd_ = 0;
    std::uint64_t ssthresh_ = ~0ull;
    std::uint64_t awnd_seen_ = 0;
    std::uint64_t recover_ = 0;
    TcpPhase phase_ = TcpPhase::SlowStart;
    int dup_ack_count_ = 0;

    SimTime srtt_ = 0;
    SimTime rttvar_ = 0;
    bool have_rtt_ = false;
    SimTime rto_ = 0;
    int backoff_shift_ = 0;
    SimTime last_peer_tsval_ = 0;

    bool rto_armed_ = false;
    Engine::Handle rto_handle_{};
    bool persist_armed_ = false;
    Engine::Handle persist_handle_{};

    std::uint64_t rto_count_ = 0;
    std::uint64_t fast_retransmits_ = 0;
    std::uint64_t segments_sent_ = 0;
    std::uint64_t discarded_acks_ = 0;
    std::uint64_t clamp_violations_ = 0;
};

} // namespace mprox

#endif
