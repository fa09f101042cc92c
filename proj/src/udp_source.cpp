#include "mprox/udp_source.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace mprox {

UdpSource::UdpSource(Engine& eng, Config cfg, std::function<void(const Segment&)> tx)
    : eng_(eng), cfg_(cfg), tx_(std::move(tx)) {
    if (cfg_.rate_bps <= 0) {
        throw std::invalid_argument("UdpSource: rate must be positive");
    }
}

void UdpSource::start() {
    eng_.schedule_at(eng_.now(), [this] { emit(); });
}

void UdpSource::emit() {
    Segment s = make_data_segment(bytes_sent_, cfg_.packet_len, eng_.now(), 0);
    bytes_sent_ += cfg_.packet_len;
    ++packets_sent_;
    tx_(s);
    // Next emission when the ideal fluid rate catches up with bytes_sent_.
    const SimTime next_at = static_cast<SimTime>(
        std::llround(static_cast<double>(bytes_sent_) * 8e6 / cfg_.rate_bps));
    eng_.schedule_at(std::max(eng_.now(), next_at), [this] { emit(); });
}

} // namespace mprox
