#ifndef MPROX_CROSSLAYER_HPP
#define MPROX_CROSSLAYER_HPP

#include "mprox/engine.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace mprox {

/// One gNB-side state snapshot: RLC occupancy, achievable rate under the
/// full-buffer assumption, and the outage indicator.
struct CrossLayerSample {
    SimTime taken_at = 0;
    std::uint64_t buffer_bytes = 0;
    std::uint64_t rate_bps = 0;
    bool outage = false;
};

/// Periodic sampling of gNB state, delivered to the proxy D_info later.
/// D_info = 0 models a gNB-resident proxy; a constant positive D_info models
/// an edge/core deployment. With a constant delay, delivery order matches
/// sampling order.
class CrossLayerBus {
public:
    struct Config {
        SimTime d_info_us = 0;
        SimTime t_info_us = 10'000;
    };

    CrossLayerBus(Engine& eng, Config cfg, std::function<CrossLayerSample()> sampler);

    /// Begins the self-rescheduling sampling chain (first sample at start+T).
    void start();

    /// Fired at delivery time (push path into the proxy).
    std::function<void(const CrossLayerSample&)> on_deliver;

    /// Most recently delivered sample, if any (pull path).
    const std::optional<CrossLayerSample>& latest() const { return latest_; }

    /// now - taken_at of the latest delivered sample.
    SimTime info_age() const;

    std::uint64_t samples_delivered() const { return delivered_; }

private:
    void sample();

    Engine& eng_;
    Config cfg_;
    std::function<CrossLayerSample()> sampler_;
    std::optional<CrossLayerSample> latest_;
    std::uint64_t delivered_ = 0;
};

} // namespace mprox

#endif
