#include "mprox/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace mprox {

const char* to_string(LinkState s) {
    switch (s) {
    case LinkState::Los: return "LOS";
    case LinkState::Nlos: return "NLOS";
    case LinkState::Outage: return "OUTAGE";
    }
    return "?";
}

Point Scenario::ue_position(SimTime t) const {
    const double dx = ue_end.x - ue_start.x;
    const double dy = ue_end.y - ue_start.y;
    const double path_len = std::hypot(dx, dy);
    double travelled = ue_speed_mps * to_seconds(t);
    if (travelled >= path_len) {
        return ue_end;
    }
    const double f = travelled / path_len;
    return Point{ue_start.x + f * dx, ue_start.y + f * dy};
}

ChannelState Scenario::channel_state(SimTime t, const RateConfig& rates) const {
    for (const auto& o : outages) {
        if (t >= o.begin_us && t < o.end_us) {
            return ChannelState{LinkState::Outage, 0.0, true};
        }
    }
    const Point ue = ue_position(t);
    for (const auto& r : obstacles) {
        if (segment_intersects_rect(gnb, ue, r)) {
            return ChannelState{LinkState::Nlos, rates.nlos_bps, false};
        }
    }
    return ChannelState{LinkState::Los, rates.los_bps, false};
}

void Scenario::validate() const {
    if (ue_speed_mps <= 0) {
        throw std::invalid_argument("Scenario: ue_speed must be positive");
    }
    if (ue_start.x == ue_end.x && ue_start.y == ue_end.y) {
        throw std::invalid_argument("Scenario: ue_start equals ue_end");
    }
    for (const auto& r : obstacles) {
        if (r.contains(gnb)) {
            throw std::invalid_argument("Scenario: obstacle contains the gNB");
        }
        if (segment_intersects_rect(ue_start, ue_end, r)) {
            throw std::invalid_argument("Scenario: obstacle intersects the UE path");
        }
    }
}

std::vector<Rect> generate_obstacles(int count, const Rect& region,
                                     const ObstacleBounds& bounds, RngStream& rng) {
    if (count < 0) {
        throw std::invalid_argument("generate_obstacles: negative count");
    }
    if (region.width() < bounds.min_w || region.height() < bounds.min_h) {
        throw std::invalid_argument("generate_obstacles: region too small for minimum obstacle size");
    }
    const double max_w = std::min(bounds.max_w, region.width());
    const double max_h = std::min(bounds.max_h, region.height());

    std::vector<Rect> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double w = rng.uniform(bounds.min_w, max_w);
        const double h = rng.uniform(bounds.min_h, max_h);
        const double x = rng.uniform(region.x_min, region.x_max - w);
        const double y = rng.uniform(region.y_min, region.y_max - h);
        out.push_back(Rect{x, y, x + w, y + h});
    }
    return out;
}

} // namespace mprox
