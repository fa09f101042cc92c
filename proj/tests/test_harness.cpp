#include "mprox/harness.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace mprox;

namespace {

RunConfig quick_cfg(Transport t) {
    RunConfig cfg;
    cfg.transport = t;
    cfg.obstacle_count = 0;
    cfg.duration_us = 1'000'000;
    return cfg;
}

} // namespace

TEST_CASE("transport names round-trip") {
    for (Transport t : {Transport::NewReno, Transport::NewRenoProxy, Transport::Udp}) {
        CHECK(transport_from_string(to_string(t)) == t);
    }
    CHECK_THROWS_AS(transport_from_string("carrier-pigeon"), std::invalid_argument);
}

TEST_CASE("config validation rejects nonsense") {
    RunConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.ue_speed = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = RunConfig{};
    cfg.duration_us = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = RunConfig{};
    cfg.mss1 = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("UDP at an LOS-only link delivers close to the line rate") {
    auto cfg = quick_cfg(Transport::Udp);
    const auto m = run_one(cfg);
    // With slot-credit carryover the link sustains the full 3.2 Gbit/s; the
    // first core-delay worth of slots is empty, hence the tolerance.
    CHECK(m.goodput_bps == doctest::Approx(3.2e9).epsilon(0.05));
    CHECK(m.rlc_drops == 0);
    CHECK(m.latency_samples > 0);
    CHECK(m.mean_ran_latency_us < 1000);
}

TEST_CASE("NewReno completes a bounded transfer intact") {
    auto cfg = quick_cfg(Transport::NewReno);
    cfg.total_bytes = 1ull << 20;
    cfg.duration_us = 3'000'000;
    const auto m = run_one(cfg);
    CHECK(m.delivered_bytes == cfg.total_bytes);
    CHECK(m.digest_ok);
    CHECK(m.clamp_violations == 0);
}

TEST_CASE("proxied NewReno completes a bounded transfer intact") {
    auto cfg = quick_cfg(Transport::NewRenoProxy);
    cfg.total_bytes = 1ull << 20;
    cfg.duration_us = 3'000'000;
    const auto m = run_one(cfg);
    CHECK(m.delivered_bytes == cfg.total_bytes);
    CHECK(m.digest_ok);
    CHECK(m.semantics_ok);
    CHECK(m.clamp_violations == 0);
}

TEST_CASE("a run is deterministic in its seed") {
    RunConfig cfg; // default scenario, 3 random obstacles
    cfg.duration_us = 500'000;
    const auto a = run_one(cfg);
    const auto b = run_one(cfg);
    CHECK(a.trace_hash == b.trace_hash);
    CHECK(a.goodput_bps == b.goodput_bps);
    CHECK(a.delivered_bytes == b.delivered_bytes);
    CHECK(a.mean_ran_latency_us == b.mean_ran_latency_us);

    cfg.seed = 2;
    const auto c = run_one(cfg);
    CHECK(c.trace_hash != a.trace_hash); // different obstacle layout
}

TEST_CASE("sweep returns rows in grid order and honors the grid") {
    SweepGrid grid;
    grid.d_rs_us = {1000, 5000};
    grid.b_rlc_bytes = {10ull << 20};
    grid.transports = {Transport::NewReno, Transport::NewRenoProxy};
    grid.seeds = 2;
    grid.base = quick_cfg(Transport::NewReno);
    grid.base.total_bytes = 1ull << 20;
    grid.base.duration_us = 1'000'000;

    const auto rows = run_sweep(grid, 2, nullptr);
    REQUIRE(rows.size() == 2 * 1 * 2 * 2);
    CHECK(rows[0].d_rs_us == 1000);
    CHECK(rows[0].transport == Transport::NewReno);
    CHECK(rows[0].seed == 1);
    CHECK(rows[1].seed == 2);
    CHECK(rows[2].transport == Transport::NewRenoProxy);
    CHECK(rows[4].d_rs_us == 5000);
    CHECK(rows[0].config_id == "newreno-drs1ms-b10MB");
    CHECK(rows[2].config_id == "newreno+milliproxy-drs1ms-b10MB");
}

TEST_CASE("a failing cell is reported and skipped, the sweep continues") {
    SweepGrid grid;
    grid.d_rs_us = {1000};
    grid.b_rlc_bytes = {10ull << 20};
    grid.transports = {Transport::NewReno};
    grid.seeds = 1;
    grid.base = quick_cfg(Transport::NewReno);
    grid.base.policy = "no-such-policy"; // only breaks proxy cells
    grid.base.duration_us = 200'000;
    std::ostringstream errs;
    auto rows = run_sweep(grid, 1, &errs);
    CHECK(rows.size() == 1); // plain NewReno ignores the policy name
    CHECK(errs.str().empty());

    grid.transports = {Transport::NewRenoProxy, Transport::NewReno};
    rows = run_sweep(grid, 1, &errs);
    CHECK(rows.size() == 1); // the proxy cell failed
    CHECK(rows[0].transport == Transport::NewReno);
    CHECK(errs.str().find("no-such-policy") != std::string::npos);
}

TEST_CASE("t table spot values") {
    CHECK(t_critical_95(1) == doctest::Approx(12.706));
    CHECK(t_critical_95(10) == doctest::Approx(2.228));
    CHECK(t_critical_95(30) == doctest::Approx(2.042));
    CHECK(t_critical_95(49) == doctest::Approx(2.009));
    CHECK(t_critical_95(1000) == doctest::Approx(1.960));
}

TEST_CASE("summarize computes paired gains as ratios of matched-seed means") {
    std::vector<RunRow> rows;
    auto add = [&](Transport t, std::uint64_t seed, double gp, double lat) {
        RunRow r;
        r.config_id = std::string(to_string(t)) + "-x";
        r.transport = t;
        r.d_rs_us = 20'000;
        r.b_rlc_bytes = 10ull << 20;
        r.seed = seed;
        r.metrics.goodput_bps = gp;
        r.metrics.mean_ran_latency_us = lat;
        rows.push_back(r);
    };
    add(Transport::NewReno, 1, 1e9, 40'000);
    add(Transport::NewReno, 2, 2e9, 60'000);
    add(Transport::NewRenoProxy, 1, 3e9, 10'000);
    add(Transport::NewRenoProxy, 2, 3e9, 15'000);

    const auto s = summarize(rows);
    REQUIRE(s.rows.size() == 2);
    REQUIRE(s.gains.size() == 1);
    CHECK(s.gains[0].goodput_gain == doctest::Approx(6e9 / 3e9));
    CHECK(s.gains[0].latency_reduction == doctest::Approx(100'000.0 / 25'000.0));

    for (const auto& row : s.rows) {
        CHECK(row.n == 2);
        if (row.transport == Transport::NewReno) {
            CHECK(row.goodput_mean == doctest::Approx(1.5e9));
            // CI half-width: t(1) * sd/sqrt(2), sd = 0.7071e9.
            CHECK(row.goodput_ci95 ==
                  doctest::Approx(12.706 * (0.5e9 * std::sqrt(2.0)) / std::sqrt(2.0)).epsilon(0.01));
        }
    }
}

TEST_CASE("runs CSV round-trips exactly") {
    SweepGrid grid;
    grid.d_rs_us = {1000};
    grid.b_rlc_bytes = {10ull << 20};
    grid.transports = {Transport::NewReno, Transport::NewRenoProxy};
    grid.seeds = 2;
    grid.base.total_bytes = 1ull << 20;
    grid.base.duration_us = 1'000'000;
    const auto rows = run_sweep(grid, 1, nullptr);
    REQUIRE(rows.size() == 4);

    std::ostringstream os;
    write_runs_csv(os, rows);
    std::istringstream is(os.str());
    const auto back = read_runs_csv(is);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].config_id == rows[i].config_id);
        CHECK(back[i].seed == rows[i].seed);
        CHECK(back[i].transport == rows[i].transport);
        CHECK(back[i].metrics.goodput_bps == rows[i].metrics.goodput_bps);
        CHECK(back[i].metrics.delivered_bytes == rows[i].metrics.delivered_bytes);
        CHECK(back[i].metrics.mean_ran_latency_us == rows[i].metrics.mean_ran_latency_us);
        CHECK(back[i].metrics.max_ran_latency_us == rows[i].metrics.max_ran_latency_us);
        CHECK(back[i].metrics.mean_rlc_occupancy == rows[i].metrics.mean_rlc_occupancy);
        CHECK(back[i].metrics.digest_ok == rows[i].metrics.digest_ok);
        CHECK(back[i].metrics.semantics_ok == rows[i].metrics.semantics_ok);
        CHECK(back[i].metrics.trace_hash == rows[i].metrics.trace_hash);
    }
    // A second serialization is byte-identical.
    std::ostringstream os2;
    write_runs_csv(os2, back);
    CHECK(os2.str() == os.str());
}

TEST_CASE("read_runs_csv rejects malformed input") {
    std::istringstream bad_header("nope\n");
    CHECK_THROWS(read_runs_csv(bad_header));
}

TEST_CASE("plot data uses D_S1 + D_RS in ms as x values") {
    SweepSummary s;
    for (SimTime d_rs : {1000, 5000, 10'000, 20'000}) {
        SummaryRow r;
        r.config_id = "c";
        r.transport = Transport::NewReno;
        r.d_rs_us = d_rs;
        r.b_rlc_bytes = 10ull << 20;
        r.goodput_mean = 1e9;
        r.latency_mean_us = 5000;
        s.rows.push_back(r);
    }
    std::ostringstream gp, lat;
    write_plot_data(gp, lat, s, 1000);
    std::istringstream in(gp.str());
    std::string header;
    std::getline(in, header);
    CHECK(header.find("newreno-b10MB") != std::string::npos);
    std::vector<long> xs;
    long x;
    double v;
    while (in >> x >> v) {
        xs.push_back(x);
    }
    CHECK(xs == std::vector<long>{2, 6, 11, 21});
}

TEST_CASE("empty summary produces header-only plot data") {
    std::ostringstream gp, lat;
    write_plot_data(gp, lat, SweepSummary{}, 1000);
    CHECK(gp.str() == "# x_ms\n");
    CHECK(lat.str() == "# x_ms\n");
}

TEST_CASE("config files parse flat key=value with comments") {
    const std::string path = "test_cfg.tmp";
    {
        std::ofstream out(path);
        out << "# example configuration\n"
            << "transport = udp\n"
            << "d_rs_us = 5000   # inline comment\n"
            << "b_rlc_bytes=20971520\n"
            << "outages = 1000000-2000000;3000000-3500000\n"
            << "policy = bdp-conservative\n"
            << "policy.buffer_threshold = 1048576\n"
            << "\n";
    }
    const auto cfg = parse_config_file(path);
    std::remove(path.c_str());
    CHECK(cfg.transport == Transport::Udp);
    CHECK(cfg.d_rs_us == 5000);
    CHECK(cfg.b_rlc_bytes == 20ull << 20);
    REQUIRE(cfg.outages.size() == 2);
    CHECK(cfg.outages[0].begin_us == 1'000'000);
    CHECK(cfg.outages[1].end_us == 3'500'000);
    CHECK(cfg.policy == "bdp-conservative");
    CHECK(cfg.policy_params.at("buffer_threshold") == "1048576");
}

TEST_CASE("unknown config keys are an error") {
    RunConfig cfg;
    CHECK_THROWS_AS(apply_config_kv(cfg, "warp_factor", "9"), std::invalid_argument);
    const std::string path = "test_cfg_bad.tmp";
    {
        std::ofstream out(path);
        out << "warp_factor = 9\n";
    }
    CHECK_THROWS_AS(parse_config_file(path), std::invalid_argument);
    std::remove(path.c_str());
    CHECK_THROWS_AS(parse_config_file("does_not_exist.cfg"), std::invalid_argument);
}
