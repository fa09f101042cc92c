#ifndef MPROX_SCENARIO_HPP
#define MPROX_SCENARIO_HPP

#include "mprox/geometry.hpp"
#include "mprox/rng.hpp"
#include "mprox/sim_time.hpp"

#include <vector>

namespace mprox {

enum class LinkState { Los, Nlos, Outage };

const char* to_string(LinkState s);

/// Channel snapshot at one instant: blockage label, the achievable PHY rate
/// it maps to, and the outage indicator exported to the cross-layer bus.
struct ChannelState {
    LinkState label = LinkState::Los;
    double phy_rate_bps = 0;
    bool outage = false;
};

struct RateConfig {
    double los_bps = 3.2e9;
    double nlos_bps = 200e6; // stand-in for the LOS->NLOS rate drop; configurable
};

/// Half-open interval [begin_us, end_us) during which the link is forced
/// into outage. Scripted rather than emergent, so timeout behaviour can be
/// tested deterministically.
struct OutageInterval {
    SimTime begin_us = 0;
    SimTime end_us = 0;
};

struct ObstacleBounds {
    double min_w = 2, max_w = 8;   // meters
    double min_h = 5, max_h = 20;  // meters
};

/// Static geometry of one run: fixed gNB, a UE moving on a straight path at
/// constant speed, and random rectangular obstacles between the two. Blockage
/// is binary: the link is NLOS exactly when an obstacle cuts the sightline.
struct Scenario {
    Point gnb{25.0, 100.0};
    Point ue_start{0.0, 0.0};
    Point ue_end{50.0, 0.0};
    double ue_speed_mps = 5.0;
    std::vector<Rect> obstacles;
    std::vector<OutageInterval> outages;

    /// Linear motion from ue_start toward ue_end, clamped at ue_end.
    Point ue_position(SimTime t) const;

    /// Pure function of (t, scenario): same query, same answer.
    ChannelState channel_state(SimTime t, const RateConfig& rates) const;

    /// Throws if the configuration violates its own constraints (zero speed,
    /// degenerate path, obstacle covering the gNB or the UE path).
    void validate() const;
};

/// Uniformly places `count` rectangles inside `region`, drawing only from the
/// given stream. Throws std::invalid_argument when the region cannot fit the
/// minimum obstacle size.
std::vector<Rect> generate_obstacles(int count, const Rect& region,
                                     const ObstacleBounds& bounds, RngStream& rng);

} // namespace mprox

#endif
