#include "mprox/fw_policy.hpp"

#include <stdexcept>

namespace mprox {

namespace {

std::uint64_t bdp_bytes(SimTime rtt_min_us, std::uint64_t rate_bps) {
    // bytes = rtt[s] * rate[bit/s] / 8, floored once. 128-bit intermediate:
    // rtt_min_us * rate_bps overflows 64 bits well within the valid range.
    const unsigned __int128 prod =
        static_cast<unsigned __int128>(static_cast<std::uint64_t>(rtt_min_us)) * rate_bps;
    return static_cast<std::uint64_t>(prod / 8'000'000u);
}

std::uint64_t parse_bytes(const PolicyRegistry::Params& p, const std::string& key,
                          std::uint64_t fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : std::stoull(it->second);
}

} // namespace

std::uint64_t compute_window(const PolicyConfig& cfg, const FlowWindowInput& in) {
    switch (cfg.kind) {
    case PolicyKind::Fixed:
        return cfg.fixed_value;
    case PolicyKind::Bdp:
        if (!in.rtt_available) return cfg.init_window;
        return bdp_bytes(in.rtt_min_us, in.rate_bps);
    case PolicyKind::ConservativeBdp: {
        if (!in.rtt_available) return cfg.init_window;
        const std::uint64_t w = bdp_bytes(in.rtt_min_us, in.rate_bps);
        if (in.buffer_bytes <= cfg.buffer_threshold) {
            return w;
        }
        const std::uint64_t penalty = 2 * in.buffer_bytes;
        return w > penalty ? w - penalty : 0;
    }
    }
    return 0;
}

void PolicyRegistry::register_policy(const std::string& name, Factory f) {
    if (!factories_.emplace(name, std::move(f)).second) {
        throw std::invalid_argument("PolicyRegistry: duplicate policy name '" + name + "'");
    }
}

PolicyConfig PolicyRegistry::make(const std::string& name, const Params& params) const {
    auto it = factories_.find(name);
    if (it == factories_.end()) {
        throw std::invalid_argument("PolicyRegistry: unknown policy '" + name + "'");
    }
    return it->second(params);
}

void register_builtin_policies(PolicyRegistry& reg) {
    auto common = [](PolicyConfig cfg, const PolicyRegistry::Params& p) {
        cfg.init_window = parse_bytes(p, "init_window", cfg.init_window);
        cfg.buffer_threshold = parse_bytes(p, "buffer_threshold", cfg.buffer_threshold);
        cfg.fixed_value = parse_bytes(p, "fixed_value", cfg.fixed_value);
        return cfg;
    };
    reg.register_policy("bdp", [common](const PolicyRegistry::Params& p) {
        return common(PolicyConfig{PolicyKind::Bdp}, p);
    });
    reg.register_policy("bdp-conservative", [common](const PolicyRegistry::Params& p) {
        return common(PolicyConfig{PolicyKind::ConservativeBdp}, p);
    });
    reg.register_policy("fixed", [common](const PolicyRegistry::Params& p) {
        return common(PolicyConfig{PolicyKind::Fixed}, p);
    });
}

} // namespace mprox
