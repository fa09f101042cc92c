#include "mprox/proxy.hpp"

#include <algorithm>
#include <utility>

namespace mprox {

void RttEstimator::on_server_data(const Segment& s) {
    if (s.ts_val <= 0 || s.ts_echo <= 0) {
        return; // no usable sample yet
    }
    const SimTime d = s.ts_val - s.ts_echo;
    if (d < 0) {
        return;
    }
    uplink_ = d;
    combine();
}

void RttEstimator::on_ue_ack(const Segment& a) {
    if (a.ts_val <= 0 || a.ts_echo <= 0) {
        return;
    }
    const SimTime d = a.ts_val - a.ts_echo;
    if (d < 0) {
        return;
    }
    downlink_ = d;
    combine();
}

void RttEstimator::combine() {
    if (!uplink_ || !downlink_) {
        return;
    }
    last_rtt_ = *uplink_ + *downlink_;
    rtt_min_ = rtt_min_ ? std::min(*rtt_min_, *last_rtt_) : *last_rtt_;
}

ProxyInstance::ProxyInstance(Engine& eng, Config cfg,
                             std::function<void(const Segment&)> tx_toward_ue,
                             std::function<void(const Segment&)> tx_toward_server)
    : eng_(eng), cfg_(cfg), tx_ue_(std::move(tx_toward_ue)), tx_server_(std::move(tx_toward_server)) {
    fw_ = compute_window(cfg_.policy, FlowWindowInput{}); // init window until first RTT sample
}

void ProxyInstance::refresh_window() {
    FlowWindowInput in;
    in.rtt_available = rtt_.available() && info_.has_value();
    if (in.rtt_available) {
        in.rtt_min_us = rtt_.rtt_min_us();
        in.rate_bps = info_->rate_bps;
        in.buffer_bytes = info_->buffer_bytes;
        in.info_age_us = eng_.now() - info_->taken_at;
    }
    fw_ = compute_window(cfg_.policy, in);
}

std::uint64_t ProxyInstance::new_bytes_in(std::uint64_t begin, std::uint64_t end) const {
    std::uint64_t covered = 0;
    auto it = stored_.upper_bound(begin);
    if (it != stored_.begin()) {
        --it;
    }
    for (; it != stored_.end() && it->first < end; ++it) {
        const std::uint64_t lo = std::max(begin, it->first);
        const std::uint64_t hi = std::min(end, it->second);
        if (hi > lo) {
            covered += hi - lo;
        }
    }
    return (end - begin) - covered;
}

void ProxyInstance::store_range(std::uint64_t begin, std::uint64_t end) {
    auto it = stored_.lower_bound(begin);
    if (it != stored_.begin()) {
        auto prev = std::prev(it);
        if (prev->second >= begin) {
            begin = prev->first;
            it = prev;
        }
    }
    std::uint64_t merged_end = end;
    while (it != stored_.end() && it->first <= merged_end) {
        merged_end = std::max(merged_end, it->second);
        it = stored_.erase(it);
    }
    stored_[begin] = merged_end;
}

void ProxyInstance::evict_below(std::uint64_t offset) {
    for (auto it = stored_.begin(); it != stored_.end() && it->first < offset;) {
        const std::uint64_t hi = std::min(it->second, offset);
        occupancy_ -= hi - it->first;
        if (it->second > offset) {
            stored_[offset] = it->second;
            stored_.erase(it);
            break;
        }
        it = stored_.erase(it);
    }
}

SimTime ProxyInstance::tail_ts(std::uint64_t end_offset) const {
    // ts_val of the server segment whose range covers byte end_offset-1:
    // the first recorded segment end >= end_offset.
    auto it = seg_tail_ts_.lower_bound(end_offset);
    return it == seg_tail_ts_.end() ? 0 : it->second;
}

void ProxyInstance::send_upstream_ack(std::uint64_t ack_no, SimTime ts_val, SimTime ts_echo) {
    Segment a;
    a.ack = true;
    a.ack_no = ack_no;
    a.adv_window = std::min(fw_, free_space());
    a.ts_val = ts_val;
    a.ts_echo = ts_echo;
    highest_upstream_ack_ = std::max(highest_upstream_ack_, ack_no);
    ++relayed_acks_;
    tx_server_(a);
}

void ProxyInstance::on_server_segment(const Segment& s) {
    if (!s.is_data()) {
        // Window probe: answer with the current relay state so the sender
        // sees the up-to-date advertised window.
        ++dup_acks_relayed_;
        send_upstream_ack(ue_acked_, eng_.now(), 0);
        return;
    }
    rtt_.on_server_data(s);
    refresh_window();

    const std::uint64_t end = s.seq + s.len;
    if (end <= ue_acked_) {
        // Stale retransmission of data the UE already has; re-ACK so the
        // sender advances. No timestamp echo: the sample would not span
        // the full path.
        send_upstream_ack(ue_acked_, eng_.now(), 0);
        emit_trace();
        return;
    }
    const std::uint64_t begin = std::max(s.seq, ue_acked_);
    const std::uint64_t fresh = new_bytes_in(begin, end);
    if (fresh > 0) {
        if (fresh > free_space()) {
            ++drops_; // the server will retransmit
            emit_trace();
            return;
        }
        store_range(begin, end);
        occupancy_ += fresh;
    } else if (s.seq == ue_acked_ && end <= forwarded_) {
        // The server is retransmitting data the proxy already forwarded:
        // the copy toward the UE must have been lost on the RAN. Re-forward
        // locally, since the proxy absorbs the retransmission itself.
        retransmit_to_ue();
    }
    seg_tail_ts_[end] = s.ts_val;
    offer();
    emit_trace();
}

std::uint64_t ProxyInstance::in_order_available() const {
    auto it = stored_.upper_bound(forwarded_);
    if (it == stored_.begin()) {
        return 0;
    }
    --it;
    return it->second > forwarded_ ? it->second - forwarded_ : 0;
}

std::uint64_t ProxyInstance::fw_headroom() const {
    const std::uint64_t unacked = forwarded_ - ue_acked_;
    return fw_ > unacked ? fw_ - unacked : 0;
}

void ProxyInstance::emit_toward_ue(std::uint32_t len) {
    Segment s;
    s.seq = forwarded_;
    s.len = len;
    // Keep the originating server timestamp so the UE's echo still measures
    // the full server->UE path.
    s.ts_val = tail_ts(forwarded_ + len);
    s.ts_echo = last_ue_tsval_;
    s.payload_sum = stream_range_sum(forwarded_, forwarded_ + len);
    forwarded_ += len;
    forwarded_bytes_ += len;
    ++segments_to_ue_;
    tx_ue_(s);
}

void ProxyInstance::retransmit_to_ue() {
    if (forwarded_ <= ue_acked_) {
        return;
    }
    const std::uint64_t len64 = std::min<std::uint64_t>(cfg_.mss2, forwarded_ - ue_acked_);
    Segment s;
    s.seq = ue_acked_;
    s.len = static_cast<std::uint32_t>(len64);
    s.ts_val = tail_ts(s.seq + s.len);
    s.ts_echo = last_ue_tsval_;
    s.payload_sum = stream_range_sum(s.seq, s.seq + s.len);
    ++ue_retransmissions_;
    ++segments_to_ue_;
    tx_ue_(s);
}

void ProxyInstance::offer() {
    while (true) {
        const std::uint64_t len64 =
            std::min<std::uint64_t>({in_order_available(), cfg_.mss2, fw_headroom()});
        if (len64 == 0) {
            break;
        }
        if (len64 < cfg_.mss2 && in_order_available() < cfg_.mss2) {
            // Partial aggregate: hold it for the flush timeout in case more
            // in-order payload is about to arrive back-to-back.
            arm_flush();
            break;
        }
        emit_toward_ue(static_cast<std::uint32_t>(len64));
    }
}

void ProxyInstance::arm_flush() {
    if (flush_armed_) {
        return;
    }
    flush_armed_ = true;
    flush_handle_ = eng_.schedule_in(cfg_.flush_timeout_us, [this] { on_flush_fire(); });
}

void ProxyInstance::on_flush_fire() {
    flush_armed_ = false;
    const std::uint64_t len64 =
        std::min<std::uint64_t>({in_order_available(), cfg_.mss2, fw_headroom()});
    if (len64 > 0) {
        emit_toward_ue(static_cast<std::uint32_t>(len64));
    }
    if (in_order_available() > 0) {
        arm_flush(); // still blocked (fw) or more pending; retry later
    }
    emit_trace();
}

void ProxyInstance::on_ue_ack(const Segment& a) {
    if (!a.ack) {
        return;
    }
    last_ue_tsval_ = a.ts_val;
    rtt_.on_ue_ack(a);
    refresh_window();

    if (a.ack_no <= ue_acked_) {
        // Duplicate from the UE: relay exactly one duplicate upstream so the
        // 3-dup-ACK loss signal keeps its count, and after three of them
        // re-forward the missing head of line ourselves.
        ++dup_acks_relayed_;
        send_upstream_ack(ue_acked_, a.ts_val, 0);
        if (forwarded_ > ue_acked_ && ++ue_dup_count_ >= 3) {
            ue_dup_count_ = 0;
            retransmit_to_ue();
        }
        offer();
        emit_trace();
        return;
    }
    ue_dup_count_ = 0;

    const std::uint64_t prev = ue_acked_;
    evict_below(a.ack_no);
    ue_acked_ = a.ack_no;
    forwarded_ = std::max(forwarded_, ue_acked_);

    // Fan the cumulative UE ACK out into per-MSS1 upstream ACKs, ending
    // exactly on the UE's ack number. The UE's own timestamp is preserved so
    // the server-side uplink estimate spans the whole path.
    for (std::uint64_t no = prev + cfg_.mss1; ; no += cfg_.mss1) {
        if (no >= a.ack_no) {
            send_upstream_ack(a.ack_no, a.ts_val, tail_ts(a.ack_no));
            break;
        }
        send_upstream_ack(no, a.ts_val, tail_ts(no));
    }

    seg_tail_ts_.erase(seg_tail_ts_.begin(), seg_tail_ts_.lower_bound(ue_acked_ + 1));
    offer();
    emit_trace();
}

void ProxyInstance::on_crosslayer(const CrossLayerSample& s) {
    info_ = s;
    refresh_window();
    offer();
    emit_trace();
}

void ProxyInstance::emit_trace() {
    if (on_trace) {
        on_trace(TraceSample{eng_.now(), fw_, rtt_.available() ? rtt_.rtt_min_us() : -1,
                             occupancy_, forwarded_bytes_, relayed_acks_});
    }
}

} // namespace mprox
