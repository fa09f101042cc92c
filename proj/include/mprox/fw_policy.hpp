#ifndef MPROX_FW_POLICY_HPP
#define MPROX_FW_POLICY_HPP

#include "mprox/sim_time.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>

namespace mprox {

/// The cross-layer triple a flow-window policy consumes, plus the staleness
/// of the sample it came from.
struct FlowWindowInput {
    bool rtt_available = false;
    SimTime rtt_min_us = 0;
    std::uint64_t rate_bps = 0; // R_e, achievable rate under full-buffer assumption
    std::uint64_t buffer_bytes = 0; // B, RLC occupancy
    SimTime info_age_us = 0;
};

enum class PolicyKind { Bdp, ConservativeBdp, Fixed };

struct PolicyConfig {
    PolicyKind kind = PolicyKind::Bdp;
    std::uint64_t init_window = 400ull << 20; // used until the first RTT sample
    std::uint64_t buffer_threshold = 2ull << 20;
    std::uint64_t fixed_value = 0;
};

/// Pure flow-window computation, in bytes.
///   Bdp:             floor(rtt_min * R_e / 8), with rtt in seconds.
///   ConservativeBdp: same, minus 2B clamped at zero, but only while
///                    B exceeds the configured threshold.
///   Fixed:           the configured constant.
/// Before the first RTT sample both BDP variants return init_window.
std::uint64_t compute_window(const PolicyConfig& cfg, const FlowWindowInput& in);

/// Name -> policy factory table; policies are selected by name in run
/// configs, per-flow. Registering a duplicate name is a configuration error.
class PolicyRegistry {
public:
    using Params = std::map<std::string, std::string>;
    using Factory = std::function<PolicyConfig(const Params&)>;

    void register_policy(const std::string& name, Factory f);
    bool contains(const std::string& name) const { return factories_.count(name) > 0; }
    PolicyConfig make(const std::string& name, const Params& params = {}) const;

private:
    std::map<std::string, Factory> factories_;
};

/// Registers "bdp", "bdp-conservative" and "fixed". Recognized params:
/// init_window, buffer_threshold, fixed_value (bytes).
void register_builtin_policies(PolicyRegistry& reg);

} // namespace mprox

#endif
