#include "mprox/tcp_sender.hpp"

#include <algorithm>
#include <utility>

namespace mprox {

const char* to_string(TcpPhase p) {
    switch (p) {
    case TcpPhase::SlowStart: return "slow_start";
    case TcpPhase::CongestionAvoidance: return "congestion_avoidance";
    case TcpPhase::FastRecovery: return "fast_recovery";
    }
    return "?";
}

NewRenoSender::NewRenoSender(Engine& eng, Config cfg, std::function<void(const Segment&)> tx)
    : eng_(eng), cfg_(cfg), tx_(std::move(tx)) {
    cwnd_ = static_cast<std::uint64_t>(cfg_.mss) * cfg_.initial_cwnd_segments;
    awnd_seen_ = cfg_.initial_awnd;
    rto_ = cfg_.initial_rto_us;
}

void NewRenoSender::start() {
    try_send();
}

void NewRenoSender::transmit(std::uint64_t seq, std::uint32_t len) {
    Segment s = make_data_segment(seq, len, eng_.now(), last_peer_tsval_);
    ++segments_sent_;
    tx_(s);
}

void NewRenoSender::retransmit_una() {
    const std::uint32_t len = static_cast<std::uint32_t>(
        std::min<std::uint64_t>({cfg_.mss, snd_nxt_ - snd_una_, cfg_.total_bytes - snd_una_}));
    if (len == 0) {
        return;
    }
    transmit(snd_una_, len);
    arm_rto();
}

void NewRenoSender::try_send() {
    const std::uint64_t wnd = std::min(cwnd_, awnd_seen_);
    while (snd_nxt_ < cfg_.total_bytes && in_flight() < wnd) {
        const std::uint32_t len = static_cast<std::uint32_t>(
            std::min<std::uint64_t>({cfg_.mss, cfg_.total_bytes - snd_nxt_, wnd - in_flight()}));
        transmit(snd_nxt_, len);
        snd_nxt_ += len;
        snd_max_ = std::max(snd_max_, snd_nxt_);
        if (in_flight() > std::min(cwnd_, awnd_seen_)) {
            ++clamp_violations_;
        }
        if (!rto_armed_) {
            arm_rto();
        }
    }
    if (awnd_seen_ == 0 && snd_nxt_ < cfg_.total_bytes) {
        arm_persist();
    }
}

void NewRenoSender::rtt_sample(SimTime sample) {
    if (sample < 0) {
        return;
    }
    if (!have_rtt_) {
        srtt_ = sample;
        rttvar_ = sample / 2;
        have_rtt_ = true;
    } else {
        const SimTime err = sample > srtt_ ? sample - srtt_ : srtt_ - sample;
        rttvar_ = (3 * rttvar_ + err) / 4;
        srtt_ = (7 * srtt_ + sample) / 8;
    }
    rto_ = std::clamp<SimTime>(srtt_ + 4 * rttvar_, cfg_.min_rto_us, cfg_.max_rto_us);
}

void NewRenoSender::arm_rto() {
    cancel_rto();
    const SimTime timeout = std::min<SimTime>(rto_ << backoff_shift_, cfg_.max_rto_us);
    rto_handle_ = eng_.schedule_in(timeout, [this] { on_rto_fire(); });
    rto_armed_ = true;
}

void NewRenoSender::cancel_rto() {
    if (rto_armed_) {
        eng_.cancel(rto_handle_);
        rto_armed_ = false;
    }
}

void NewRenoSender::on_rto_fire() {
    rto_armed_ = false;
    if (snd_una_ >= snd_nxt_) {
        return;
    }
    ssthresh_ = std::max<std::uint64_t>(in_flight() / 2, 2ull * cfg_.mss);
    cwnd_ = cfg_.mss;
    phase_ = TcpPhase::SlowStart;
    dup_ack_count_ = 0;
    snd_nxt_ = snd_una_; // go-back-N: unacked bytes are resent
    if (backoff_shift_ < 6) {
        ++backoff_shift_;
    }
    ++rto_count_;
    arm_rto();
    try_send();
    emit_trace();
}

void NewRenoSender::arm_persist() {
    if (persist_armed_) {
        return;
    }
    persist_handle_ = eng_.schedule_in(cfg_.persist_interval_us, [this] { on_persist_fire(); });
    persist_armed_ = true;
}

void NewRenoSender::cancel_persist() {
    if (persist_armed_) {
        eng_.cancel(persist_handle_);
        persist_armed_ = false;
    }
}

void NewRenoSender::on_persist_fire() {
    persist_armed_ = false;
    if (awnd_seen_ > 0) {
        return;
    }
    // Zero-length window probe; the receiver answers with its current ACK.
    Segment probe;
    probe.seq = snd_una_;
    probe.ts_val = eng_.now();
    probe.ts_echo = last_peer_tsval_;
    tx_(probe);
    arm_persist();
}

void NewRenoSender::emit_trace() {
    if (on_trace) {
        on_trace(TraceSample{eng_.now(), cwnd_, awnd_seen_, in_flight(), phase_});
    }
}

void NewRenoSender::on_ack(const Segment& ack) {
    if (!ack.ack) {
        return;
    }
    if (ack.ack_no > snd_max_) {
        ++discarded_acks_; // acks data never sent; treat as corruption
        return;
    }
    last_peer_tsval_ = ack.ts_val;
    awnd_seen_ = ack.adv_window;
    if (awnd_seen_ > 0) {
        cancel_persist();
    }
    if (ack.ts_echo > 0) {
        rtt_sample(eng_.now() - ack.ts_echo);
    }

    if (ack.ack_no > snd_una_) {
        const std::uint64_t newly = ack.ack_no - snd_una_;
        snd_una_ = ack.ack_no;
        snd_nxt_ = std::max(snd_nxt_, snd_una_);
        dup_ack_count_ = 0;
        backoff_shift_ = 0;

        if (phase_ == TcpPhase::FastRecovery) {
            if (ack.ack_no >= recover_) {
                cwnd_ = ssthresh_;
                phase_ = TcpPhase::CongestionAvoidance;
            } else {
                // Partial ACK: the next hole is lost too. Retransmit it and
                // deflate by the amount acknowledged.
                retransmit_una();
                cwnd_ = cwnd_ > newly ? cwnd_ - newly : 0;
                cwnd_ = std::max<std::uint64_t>(cwnd_ + cfg_.mss, cfg_.mss);
            }
        } else if (phase_ == TcpPhase::SlowStart) {
            cwnd_ += cfg_.mss;
            if (cwnd_ >= ssthresh_) {
                phase_ = TcpPhase::CongestionAvoidance;
            }
        } else {
            cwnd_ += std::max<std::uint64_t>(1,
                static_cast<std::uint64_t>(cfg_.mss) * cfg_.mss / cwnd_);
        }

        if (snd_una_ >= snd_nxt_) {
            cancel_rto();
        } else {
            arm_rto();
        }
    } else if (ack.ack_no == snd_una_ && snd_nxt_ > snd_una_) {
        if (phase_ == TcpPhase::FastRecovery) {
            cwnd_ += cfg_.mss; // inflation while the hole persists
        } else if (++dup_ack_count_ == 3) {
            ssthresh_ = std::max<std::uint64_t>(in_flight() / 2, 2ull * cfg_.mss);
            cwnd_ = ssthresh_ + 3ull * cfg_.mss;
            recover_ = snd_nxt_;
            phase_ = TcpPhase::FastRecovery;
            ++fast_retransmits_;
            retransmit_una();
        }
    }

    try_send();
    emit_trace();
}

} // namespace mprox
