#ifndef MPROX_HARNESS_HPP
#define MPROX_HARNESS_HPP

#include "mprox/crosslayer.hpp"
#include "mprox/fw_policy.hpp"
#include "mprox/ran_link.hpp"
#include "mprox/scenario.hpp"
#include "mprox/sim_time.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace mprox {

enum class Transport { NewReno, NewRenoProxy, Udp };

const char* to_string(Transport t);
Transport transport_from_string(const std::string& s);

/// Everything one seeded run needs. Defaults follow the reference scenario:
/// gNB at (25,100) m, UE from (0,0) to (50,0) at 5 m/s, three random
/// obstacles, LOS 3.2 Gbit/s.
struct RunConfig {
    // scenario
    double gnb_x = 25, gnb_y = 100;
    double ue_speed = 5;
    int obstacle_count = 3;
    Rect obstacle_region{5, 20, 45, 80};
    ObstacleBounds obstacle_bounds{};
    double los_rate_bps = 3.2e9;
    double nlos_rate_bps = 200e6;
    std::vector<OutageInterval> outages;

    // fixed network (one-way delays)
    SimTime d_s1_us = 1000;
    SimTime d_rs_us = 10'000;

    // RAN link
    std::uint64_t b_rlc_bytes = 10ull << 20;
    SimTime slot_us = 125;
    SimTime uplink_delay_us = 125;

    // transport
    Transport transport = Transport::NewRenoProxy;
    std::uint32_t mss1 = 1400;
    std::uint32_t mss2 = 20000;
    std::uint64_t receiver_window = 64ull << 20;
    std::uint64_t total_bytes = 1ull << 50; // saturating by default
    double udp_rate_bps = 3.2e9;

    // proxy
    std::uint64_t proxy_buffer = 10ull << 20;
    SimTime flush_timeout_us = 1000;
    std::string policy = "bdp";
    PolicyRegistry::Params policy_params;
    CrossLayerBus::Config bus{};

    // run control
    std::uint64_t seed = 1;
    SimTime duration_us = 11'000'000; // UE traverse (10 s) + 1 s drain

    void validate() const; // throws std::invalid_argument with a description
};

struct RunMetrics {
    double goodput_bps = 0;
    std::uint64_t delivered_bytes = 0;
    double mean_ran_latency_us = 0;
    SimTime max_ran_latency_us = 0;
    std::uint64_t latency_samples = 0;
    std::uint64_t rlc_drops = 0;
    std::uint64_t proxy_drops = 0;
    double mean_rlc_occupancy = 0;
    bool digest_ok = true;
    bool semantics_ok = true; // server-acked <= UE-acked held throughout
    std::uint64_t clamp_violations = 0;
    std::uint64_t rto_count = 0;
    std::uint64_t trace_hash = 0;
};

RunMetrics run_one(const RunConfig& cfg);

/// One sweep cell result.
struct RunRow {
    std::string config_id;
    std::uint64_t seed = 0;
    Transport transport = Transport::NewReno;
    SimTime d_rs_us = 0;
    std::uint64_t b_rlc_bytes = 0;
    SimTime d_info_us = 0;
    RunMetrics metrics;
};

struct SweepGrid {
    std::vector<SimTime> d_rs_us{1000, 5000, 10'000, 20'000};
    std::vector<std::uint64_t> b_rlc_bytes{10ull << 20, 20ull << 20};
    std::vector<Transport> transports{Transport::NewReno, Transport::NewRenoProxy};
    int seeds = 50;
    std::uint64_t first_seed = 1;
    RunConfig base{};
};

/// Runs every (config, seed) cell; cells are independent engine instances and
/// execute on `threads` workers (rows come back in grid order regardless).
/// A failing cell is reported on `errors` and skipped; the sweep continues.
std::vector<RunRow> run_sweep(const SweepGrid& grid, unsigned threads,
                              std::ostream* errors = nullptr);

struct SummaryRow {
    std::string config_id;
    Transport transport = Transport::NewReno;
    SimTime d_rs_us = 0;
    std::uint64_t b_rlc_bytes = 0;
    int n = 0;
    double goodput_mean = 0, goodput_ci95 = 0;
    double latency_mean_us = 0, latency_ci95_us = 0;
};

struct GainRow {
    SimTime d_rs_us = 0;
    std::uint64_t b_rlc_bytes = 0;
    double goodput_gain = 0;      // proxy / newreno, ratio of matched-seed means
    double latency_reduction = 0; // newreno / proxy
};

struct SweepSummary {
    std::vector<SummaryRow> rows;
    std::vector<GainRow> gains;
};

SweepSummary summarize(const std::vector<RunRow>& rows);

/// Student-t 95% two-sided critical value for the given degrees of freedom.
double t_critical_95(int df);

// --- file formats -----------------------------------------------------------

void write_runs_csv(std::ostream& os, const std::vector<RunRow>& rows);
std::vector<RunRow> read_runs_csv(std::istream& is);
void write_summary_csv(std::ostream& os, const SweepSummary& s);

/// Plain-text plot data mirroring the goodput/latency figures: one x column
/// (D_S1 + D_RS in ms) and one column per config series.
void write_plot_data(std::ostream& goodput_os, std::ostream& latency_os,
                     const SweepSummary& s, SimTime d_s1_us);

/// Flat key=value config file. Unknown keys are an error; '#' starts a
/// comment. Returns `base` updated with the file's settings.
RunConfig parse_config_file(const std::string& path, RunConfig base = {});
void apply_config_kv(RunConfig& cfg, const std::string& key, const std::string& value);

} // namespace mprox

#endif
