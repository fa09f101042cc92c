#include "mprox/crosslayer.hpp"

#include <stdexcept>
#include <utility>

namespace mprox {

CrossLayerBus::CrossLayerBus(Engine& eng, Config cfg, std::function<CrossLayerSample()> sampler)
    : eng_(eng), cfg_(cfg), sampler_(std::move(sampler)) {
    if (cfg_.t_info_us <= 0) {
        throw std::invalid_argument("CrossLayerBus: T_info must be positive");
    }
    if (cfg_.d_info_us < 0) {
        throw std::invalid_argument("CrossLayerBus: D_info must be non-negative");
    }
}

void CrossLayerBus::start() {
    eng_.schedule_in(cfg_.t_info_us, [this] { sample(); });
}

void CrossLayerBus::sample() {
    eng_.schedule_in(cfg_.t_info_us, [this] { sample(); });
    CrossLayerSample s = sampler_();
    s.taken_at = eng_.now();
    eng_.schedule_in(cfg_.d_info_us, [this, s] {
        latest_ = s;
        ++delivered_;
        if (on_deliver) on_deliver(s);
    });
}

SimTime CrossLayerBus::info_age() const {
    return latest_ ? eng_.now() - latest_->taken_at : 0;
}

} // namespace mprox
