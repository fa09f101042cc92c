#ifndef MPROX_SEGMENT_HPP
#define MPROX_SEGMENT_HPP

#include "mprox/sim_time.hpp"

#include <cstdint>

namespace mprox {

/// One TCP data or ACK unit. The timestamp option is always carried. Payload
/// bytes are not materialized: the application stream is the synthetic
/// content defined by stream_range_sum below, and each data segment carries
/// the checksum of its claimed byte range so corruption of offsets or
/// re-segmentation mistakes are detectable at the receiver.
struct Segment {
    std::uint64_t seq = 0;      // first byte offset (data)
    std::uint32_t len = 0;      // payload bytes, > 0 iff data
    bool ack = false;
    bool fin = false;
    std::uint64_t ack_no = 0;      // cumulative, meaningful iff ack
    std::uint64_t adv_window = 0;  // receiver/proxy window, bytes
    SimTime ts_val = 0;
    SimTime ts_echo = 0;
    std::uint64_t payload_sum = 0;

    bool is_data() const { return len > 0; }
};

/// Checksum of the synthetic application stream over [begin, end), mod 2^64.
/// Byte i contributes i * K, so the sum has a closed form and is invariant
/// under re-segmentation: sum(a,b) + sum(b,c) == sum(a,c).
inline std::uint64_t stream_range_sum(std::uint64_t begin, std::uint64_t end) {
    constexpr std::uint64_t K = 0x9E3779B97F4A7C15ull;
    auto tri = [](std::uint64_t n) { // sum of 0..n-1 mod 2^64
        return (n % 2 == 0) ? (n / 2) * (n - 1) : n * ((n - 1) / 2);
    };
    return K * (tri(end) - tri(begin));
}

inline Segment make_data_segment(std::uint64_t seq, std::uint32_t len,
                                 SimTime ts_val, SimTime ts_echo) {
    Segment s;
    s.seq = seq;
    s.len = len;
    s.ts_val = ts_val;
    s.ts_echo = ts_echo;
    s.payload_sum = stream_range_sum(seq, seq + len);
    return s;
}

} // namespace mprox

#endif
