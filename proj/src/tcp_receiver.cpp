#include "mprox/tcp_receiver.hpp"

#include <algorithm>
#include <utility>

namespace mprox {

TcpReceiver::TcpReceiver(Engine& eng, Config cfg, std::function<void(const Segment&)> tx_ack)
    : eng_(eng), cfg_(cfg), tx_ack_(std::move(tx_ack)) {}

void TcpReceiver::send_ack(SimTime ts_echo) {
    Segment a;
    a.ack = true;
    a.ack_no = rcv_nxt_;
    a.adv_window = cfg_.adv_window;
    a.ts_val = eng_.now();
    a.ts_echo = ts_echo;
    ++acks_sent_;
    tx_ack_(a);
}

void TcpReceiver::on_segment(const Segment& s) {
    if (!s.is_data()) {
        // Window probe / keepalive: answer with the current cumulative ACK.
        send_ack(s.ts_val);
        return;
    }
    if (s.payload_sum != stream_range_sum(s.seq, s.seq + s.len)) {
        ++corrupt_segments_;
    }
    last_ts_val_ = s.ts_val;

    std::uint64_t begin = s.seq;
    const std::uint64_t end = s.seq + s.len;
    if (begin < rcv_nxt_) {
        begin = rcv_nxt_; // trim already-delivered prefix
    }
    if (begin < end) {
        if (begin == rcv_nxt_) {
            rcv_nxt_ = end;
            // Pull any now-contiguous stored ranges into the delivered prefix.
            for (auto it = ooo_.begin(); it != ooo_.end() && it->first <= rcv_nxt_;) {
                rcv_nxt_ = std::max(rcv_nxt_, it->second);
                it = ooo_.erase(it);
            }
            digest_ = stream_range_sum(0, rcv_nxt_);
        } else {
            ++out_of_order_;
            // Insert [begin, end), merging overlaps.
            auto it = ooo_.lower_bound(begin);
            if (it != ooo_.begin()) {
                auto prev = std::prev(it);
                if (prev->second >= begin) {
                    begin = prev->first;
                    it = prev;
                }
            }
            std::uint64_t merged_end = end;
            while (it != ooo_.end() && it->first <= merged_end) {
                merged_end = std::max(merged_end, it->second);
                it = ooo_.erase(it);
            }
            ooo_[begin] = merged_end;
        }
    }
    send_ack(s.ts_val);
}

} // namespace mprox
