#ifndef MPROX_UDP_SOURCE_HPP
#define MPROX_UDP_SOURCE_HPP

#include "mprox/engine.hpp"
#include "mprox/segment.hpp"

#include <cstdint>
#include <functional>

namespace mprox {

/// Constant-rate datagram source with no feedback path; the capacity
/// baseline. Emission instants are derived from the cumulative byte count so
/// the long-run rate is exact regardless of the per-packet interval rounding.
class UdpSource {
public:
    struct Config {
        double rate_bps = 3.2e9;
        std::uint32_t packet_len = 1400;
    };

    UdpSource(Engine& eng, Config cfg, std::function<void(const Segment&)> tx);

    void start();
    std::uint64_t bytes_sent() const { return bytes_sent_; }

private:
    void emit();

    Engine& eng_;
    Config cfg_;
    std::function<void(const Segment&)> tx_;
    std::uint64_t packets_sent_ = 0;
    std::uint64_t bytes_sent_ = 0;
};

} // namespace mprox

#endif
