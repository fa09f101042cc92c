#include "mprox/harness.hpp"

#include "mprox/delay_pipe.hpp"
#include "mprox/engine.hpp"
#include "mprox/proxy.hpp"
#include "mprox/segment.hpp"
#include "mprox/tcp_receiver.hpp"
#include "mprox/tcp_sender.hpp"
#include "mprox/udp_source.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace mprox {

const char* to_string(Transport t) {
    switch (t) {
    case Transport::NewReno: return "newreno";
    case Transport::NewRenoProxy: return "newreno+milliproxy";
    case Transport::Udp: return "udp";
    }
    return "?";
}

Transport transport_from_string(const std::string& s) {
    if (s == "newreno") return Transport::NewReno;
    if (s == "newreno+milliproxy") return Transport::NewRenoProxy;
    if (s == "udp") return Transport::Udp;
    throw std::invalid_argument("unknown transport '" + s + "'");
}

void RunConfig::validate() const {
    if (d_s1_us < 0 || d_rs_us < 0) {
        throw std::invalid_argument("config: delays must be non-negative");
    }
    if (ue_speed <= 0) {
        throw std::invalid_argument("config: ue_speed must be positive");
    }
    if (slot_us <= 0) {
        throw std::invalid_argument("config: slot_us must be positive");
    }
    if (mss1 == 0 || mss2 == 0) {
        throw std::invalid_argument("config: MSS values must be positive");
    }
    if (obstacle_count < 0) {
        throw std::invalid_argument("config: obstacle_count must be non-negative");
    }
    if (duration_us <= 0) {
        throw std::invalid_argument("config: duration must be positive");
    }
    if (transport == Transport::Udp && udp_rate_bps <= 0) {
        throw std::invalid_argument("config: udp_rate_bps must be positive");
    }
}

namespace {

Scenario build_scenario(const RunConfig& cfg) {
    Scenario sc;
    sc.gnb = Point{cfg.gnb_x, cfg.gnb_y};
    sc.ue_speed_mps = cfg.ue_speed;
    sc.outages = cfg.outages;
    if (cfg.obstacle_count > 0) {
        RngStream rng(cfg.seed, "obstacles");
        sc.obstacles = generate_obstacles(cfg.obstacle_count, cfg.obstacle_region,
                                          cfg.obstacle_bounds, rng);
    }
    sc.validate();
    return sc;
}

struct LatencyStats {
    double sum_us = 0;
    SimTime max_us = 0;
    std::uint64_t count = 0;

    void add(SimTime lat) {
        sum_us += static_cast<double>(lat);
        max_us = std::max(max_us, lat);
        ++count;
    }
    double mean() const { return count ? sum_us / static_cast<double>(count) : 0.0; }
};

} // namespace

RunMetrics run_one(const RunConfig& cfg) {
    cfg.validate();

    Engine eng;
    const Scenario sc = build_scenario(cfg);
    const RateConfig rates{cfg.los_rate_bps, cfg.nlos_rate_bps};

    RanLink link(eng,
                 RanLink::Config{cfg.b_rlc_bytes, cfg.slot_us, 0, cfg.uplink_delay_us},
                 [&sc, &rates](SimTime t) { return sc.channel_state(t, rates).phy_rate_bps; });

    const SimTime core_delay = cfg.d_s1_us + cfg.d_rs_us;
    LatencyStats lat;
    RunMetrics m;

    if (cfg.transport == Transport::Udp) {
        std::uint64_t delivered = 0;
        link.on_deliver = [&](const Segment& s, SimTime l) {
            delivered += s.len;
            lat.add(l);
        };
        DelayPipe core_down(eng, core_delay, [&](const Segment& s) { link.enqueue(s); });
        UdpSource src(eng, UdpSource::Config{cfg.udp_rate_bps, cfg.mss1},
                      [&](const Segment& s) { core_down.send(s); });
        link.start();
        src.start();
        eng.run_until(cfg.duration_us);

        m.delivered_bytes = delivered;
        m.goodput_bps = static_cast<double>(delivered) * 8.0 / to_seconds(cfg.duration_us);
    } else if (cfg.transport == Transport::NewReno) {
        TcpReceiver ue(eng, TcpReceiver::Config{cfg.receiver_window},
                       [&](const Segment& a) { link.send_uplink(a); });
        link.on_deliver = [&](const Segment& s, SimTime l) {
            if (s.is_data()) lat.add(l);
            ue.on_segment(s);
        };
        NewRenoSender::Config scfg;
        scfg.mss = cfg.mss1;
        scfg.total_bytes = cfg.total_bytes;
        scfg.initial_awnd = cfg.receiver_window;
        std::unique_ptr<NewRenoSender> sender;
        DelayPipe core_down(eng, core_delay, [&](const Segment& s) { link.enqueue(s); });
        DelayPipe core_up(eng, core_delay, [&](const Segment& a) { sender->on_ack(a); });
        link.on_uplink = [&](const Segment& a) { core_up.send(a); };
        sender = std::make_unique<NewRenoSender>(eng, scfg,
                                                 [&](const Segment& s) { core_down.send(s); });
        link.start();
        sender->start();
        eng.run_until(cfg.duration_us);

        m.delivered_bytes = ue.delivered();
        m.goodput_bps = static_cast<double>(ue.delivered()) * 8.0 / to_seconds(cfg.duration_us);
        m.digest_ok = ue.corrupt_segments() == 0 &&
                      ue.digest() == stream_range_sum(0, ue.delivered());
        m.clamp_violations = sender->clamp_violations();
        m.rto_count = sender->rto_count();
    } else {
        PolicyRegistry reg;
        register_builtin_policies(reg);
        ProxyInstance::Config pcfg;
        pcfg.buffer_capacity = cfg.proxy_buffer;
        pcfg.mss1 = cfg.mss1;
        pcfg.mss2 = cfg.mss2;
        pcfg.flush_timeout_us = cfg.flush_timeout_us;
        pcfg.policy = reg.make(cfg.policy, cfg.policy_params);

        TcpReceiver ue(eng, TcpReceiver::Config{cfg.receiver_window},
                       [&](const Segment& a) { link.send_uplink(a); });
        link.on_deliver = [&](const Segment& s, SimTime l) {
            if (s.is_data()) lat.add(l);
            ue.on_segment(s);
        };

        NewRenoSender::Config scfg;
        scfg.mss = cfg.mss1;
        scfg.total_bytes = cfg.total_bytes;
        // Handshake negotiation is not modeled: until the first relayed ACK
        // the sender only knows the proxy's policy-level init window, not its
        // buffer, so an undersized buffer really can overflow on the first
        // burst (the proxy drops and the server retransmits).
        scfg.initial_awnd = pcfg.policy.init_window;

        std::unique_ptr<NewRenoSender> sender;
        std::unique_ptr<ProxyInstance> proxy;
        bool semantics_ok = true;

        DelayPipe core_down(eng, core_delay,
                            [&](const Segment& s) { proxy->on_server_segment(s); });
        DelayPipe core_up(eng, core_delay, [&](const Segment& a) { sender->on_ack(a); });
        proxy = std::make_unique<ProxyInstance>(
            eng, pcfg, [&](const Segment& s) { link.enqueue(s); },
            [&](const Segment& a) {
                if (a.ack_no > proxy->ue_acked()) {
                    semantics_ok = false; // never ACK ahead of the true receiver
                }
                core_up.send(a);
            });
        link.on_uplink = [&](const Segment& a) { proxy->on_ue_ack(a); };
        sender = std::make_unique<NewRenoSender>(eng, scfg,
                                                 [&](const Segment& s) { core_down.send(s); });

        CrossLayerBus bus(eng, cfg.bus, [&]() {
            const ChannelState cs = sc.channel_state(eng.now(), rates);
            const std::uint64_t budget = link.slot_budget_bytes(cs.phy_rate_bps);
            CrossLayerSample s;
            s.buffer_bytes = link.occupancy();
            s.rate_bps = budget * 8ull * 1'000'000ull / static_cast<std::uint64_t>(cfg.slot_us);
            s.outage = cs.outage;
            return s;
        });
        bus.on_deliver = [&](const CrossLayerSample& s) { proxy->on_crosslayer(s); };

        link.start();
        bus.start();
        sender->start();
        eng.run_until(cfg.duration_us);

        m.delivered_bytes = ue.delivered();
        m.goodput_bps = static_cast<double>(ue.delivered()) * 8.0 / to_seconds(cfg.duration_us);
        m.digest_ok = ue.corrupt_segments() == 0 &&
                      ue.digest() == stream_range_sum(0, ue.delivered());
        m.semantics_ok = semantics_ok && proxy->highest_upstream_ack() <= proxy->ue_acked();
        m.clamp_violations = sender->clamp_violations();
        m.rto_count = sender->rto_count();
        m.proxy_drops = proxy->drops();
    }

    m.mean_ran_latency_us = lat.mean();
    m.max_ran_latency_us = lat.max_us;
    m.latency_samples = lat.count;
    m.rlc_drops = link.drops();
    m.mean_rlc_occupancy = link.mean_occupancy();
    m.trace_hash = eng.trace_hash();
    return m;
}

namespace {

std::string make_config_id(Transport t, SimTime d_rs_us, std::uint64_t b_rlc, SimTime d_info_us) {
    std::ostringstream os;
    os << to_string(t) << "-drs" << d_rs_us / 1000 << "ms-b" << (b_rlc >> 20) << "MB";
    if (d_info_us > 0) {
        os << "-dinfo" << d_info_us / 1000 << "ms";
    }
    return os.str();
}

} // namespace

std::vector<RunRow> run_sweep(const SweepGrid& grid, unsigned threads, std::ostream* errors) {
    if (grid.d_rs_us.empty() || grid.b_rlc_bytes.empty() || grid.transports.empty() ||
        grid.seeds <= 0) {
        throw std::invalid_argument("run_sweep: empty grid");
    }

    struct Cell {
        RunConfig cfg;
        RunRow row;
    };
    std::vector<Cell> cells;
    for (SimTime d_rs : grid.d_rs_us) {
        for (std::uint64_t b : grid.b_rlc_bytes) {
            for (Transport t : grid.transports) {
                for (int s = 0; s < grid.seeds; ++s) {
                    Cell c;
                    c.cfg = grid.base;
                    c.cfg.d_rs_us = d_rs;
                    c.cfg.b_rlc_bytes = b;
                    c.cfg.transport = t;
                    c.cfg.seed = grid.first_seed + static_cast<std::uint64_t>(s);
                    c.row.config_id = make_config_id(t, d_rs, b, c.cfg.bus.d_info_us);
                    c.row.seed = c.cfg.seed;
                    c.row.transport = t;
                    c.row.d_rs_us = d_rs;
                    c.row.b_rlc_bytes = b;
                    c.row.d_info_us = c.cfg.bus.d_info_us;
                    cells.push_back(std::move(c));
                }
            }
        }
    }

    std::vector<bool> ok(cells.size(), false);
    std::atomic<std::size_t> next{0};
    std::mutex err_mtx;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) {
                return;
            }
            try {
                cells[i].row.metrics = run_one(cells[i].cfg);
                ok[i] = true;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mtx);
                if (errors) {
                    *errors << "cell " << cells[i].row.config_id << " seed "
                            << cells[i].row.seed << " failed: " << e.what() << "\n";
                }
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    std::vector<RunRow> rows;
    rows.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (ok[i]) {
            rows.push_back(std::move(cells[i].row));
        }
    }
    return rows;
}

double t_critical_95(int df) {
    static const double table[] = {
        0,      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262,
        2.228,  2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093,
        2.086,  2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045,
        2.042};
    if (df <= 0) return 0;
    if (df <= 30) return table[df];
    if (df <= 40) return 2.021;
    if (df <= 60) return 2.009;
    if (df <= 120) return 1.980;
    return 1.960;
}

SweepSummary summarize(const std::vector<RunRow>& rows) {
    struct Acc {
        Transport transport;
        SimTime d_rs_us;
        std::uint64_t b_rlc;
        std::vector<double> goodputs;
        std::vector<double> latencies;
        std::map<std::uint64_t, std::pair<double, double>> by_seed; // goodput, latency
    };
    std::map<std::string, Acc> groups;
    for (const auto& r : rows) {
        auto& g = groups[r.config_id];
        g.transport = r.transport;
        g.d_rs_us = r.d_rs_us;
        g.b_rlc = r.b_rlc_bytes;
        g.goodputs.push_back(r.metrics.goodput_bps);
        g.latencies.push_back(r.metrics.mean_ran_latency_us);
        g.by_seed[r.seed] = {r.metrics.goodput_bps, r.metrics.mean_ran_latency_us};
    }

    auto mean_ci = [](const std::vector<double>& v) {
        const int n = static_cast<int>(v.size());
        double mean = 0;
        for (double x : v) mean += x;
        mean /= std::max(n, 1);
        if (n < 2) {
            return std::pair<double, double>{mean, 0.0};
        }
        double var = 0;
        for (double x : v) var += (x - mean) * (x - mean);
        var /= (n - 1);
        const double half = t_critical_95(n - 1) * std::sqrt(var / n);
        return std::pair<double, double>{mean, half};
    };

    SweepSummary out;
    for (const auto& [id, g] : groups) {
        SummaryRow s;
        s.config_id = id;
        s.transport = g.transport;
        s.d_rs_us = g.d_rs_us;
        s.b_rlc_bytes = g.b_rlc;
        s.n = static_cast<int>(g.goodputs.size());
        std::tie(s.goodput_mean, s.goodput_ci95) = mean_ci(g.goodputs);
        std::tie(s.latency_mean_us, s.latency_ci95_us) = mean_ci(g.latencies);
        out.rows.push_back(std::move(s));
    }

    // Paired gains: proxy vs plain NewReno over the seeds both completed.
    std::map<std::pair<SimTime, std::uint64_t>, std::pair<const Acc*, const Acc*>> pairs;
    for (const auto& [id, g] : groups) {
        auto key = std::make_pair(g.d_rs_us, g.b_rlc);
        if (g.transport == Transport::NewReno) {
            pairs[key].first = &g;
        } else if (g.transport == Transport::NewRenoProxy) {
            pairs[key].second = &g;
        }
    }
    for (const auto& [key, pr] : pairs) {
        if (!pr.first || !pr.second) {
            continue;
        }
        double base_gp = 0, base_lat = 0, prox_gp = 0, prox_lat = 0;
        int n = 0;
        for (const auto& [seed, bv] : pr.first->by_seed) {
            auto it = pr.second->by_seed.find(seed);
            if (it == pr.second->by_seed.end()) {
                continue;
            }
            base_gp += bv.first;
            base_lat += bv.second;
            prox_gp += it->second.first;
            prox_lat += it->second.second;
            ++n;
        }
        if (n == 0 || base_gp <= 0 || prox_lat <= 0) {
            continue;
        }
        GainRow gr;
        gr.d_rs_us = key.first;
        gr.b_rlc_bytes = key.second;
        gr.goodput_gain = prox_gp / base_gp;
        gr.latency_reduction = base_lat / prox_lat;
        out.gains.push_back(gr);
    }
    return out;
}

// --- CSV --------------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

constexpr const char* kRunsHeader =
    "config_id,seed,transport,d_rs_us,b_rlc_bytes,d_info_us,goodput_bps,delivered_bytes,"
    "mean_ran_latency_us,max_ran_latency_us,latency_samples,rlc_drops,proxy_drops,"
    "mean_rlc_occupancy,digest_ok,semantics_ok,clamp_violations,rto_count,trace_hash";

} // namespace

void write_runs_csv(std::ostream& os, const std::vector<RunRow>& rows) {
    os << kRunsHeader << "\n";
    for (const auto& r : rows) {
        const RunMetrics& m = r.metrics;
        os << r.config_id << ',' << r.seed << ',' << to_string(r.transport) << ','
           << r.d_rs_us << ',' << r.b_rlc_bytes << ',' << r.d_info_us << ','
           << fmt_double(m.goodput_bps) << ',' << m.delivered_bytes << ','
           << fmt_double(m.mean_ran_latency_us) << ',' << m.max_ran_latency_us << ','
           << m.latency_samples << ',' << m.rlc_drops << ',' << m.proxy_drops << ','
           << fmt_double(m.mean_rlc_occupancy) << ',' << (m.digest_ok ? 1 : 0) << ','
           << (m.semantics_ok ? 1 : 0) << ',' << m.clamp_violations << ','
           << m.rto_count << ',' << m.trace_hash << "\n";
    }
}

std::vector<RunRow> read_runs_csv(std::istream& is) {
    std::vector<RunRow> rows;
    std::string line;
    if (!std::getline(is, line) || line != kRunsHeader) {
        throw std::runtime_error("runs CSV: missing or unexpected header");
    }
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 19) {
            throw std::runtime_error("runs CSV: bad field count in row");
        }
        RunRow r;
        r.config_id = f[0];
        r.seed = std::stoull(f[1]);
        r.transport = transport_from_string(f[2]);
        r.d_rs_us = std::stoll(f[3]);
        r.b_rlc_bytes = std::stoull(f[4]);
        r.d_info_us = std::stoll(f[5]);
        RunMetrics& m = r.metrics;
        m.goodput_bps = std::stod(f[6]);
        m.delivered_bytes = std::stoull(f[7]);
        m.mean_ran_latency_us = std::stod(f[8]);
        m.max_ran_latency_us = std::stoll(f[9]);
        m.latency_samples = std::stoull(f[10]);
        m.rlc_drops = std::stoull(f[11]);
        m.proxy_drops = std::stoull(f[12]);
        m.mean_rlc_occupancy = std::stod(f[13]);
        m.digest_ok = f[14] == "1";
        m.semantics_ok = f[15] == "1";
        m.clamp_violations = std::stoull(f[16]);
        m.rto_count = std::stoull(f[17]);
        m.trace_hash = std::stoull(f[18]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_summary_csv(std::ostream& os, const SweepSummary& s) {
    os << "config_id,transport,d_rs_us,b_rlc_bytes,n,goodput_mean_bps,goodput_ci95_bps,"
          "latency_mean_us,latency_ci95_us\n";
    for (const auto& r : s.rows) {
        os << r.config_id << ',' << to_string(r.transport) << ',' << r.d_rs_us << ','
           << r.b_rlc_bytes << ',' << r.n << ',' << fmt_double(r.goodput_mean) << ','
           << fmt_double(r.goodput_ci95) << ',' << fmt_double(r.latency_mean_us) << ','
           << fmt_double(r.latency_ci95_us) << "\n";
    }
    os << "\n";
    os << "gain,d_rs_us,b_rlc_bytes,goodput_gain,latency_reduction\n";
    for (const auto& g : s.gains) {
        os << "gain," << g.d_rs_us << ',' << g.b_rlc_bytes << ','
           << fmt_double(g.goodput_gain) << ',' << fmt_double(g.latency_reduction) << "\n";
    }
}

void write_plot_data(std::ostream& goodput_os, std::ostream& latency_os,
                     const SweepSummary& s, SimTime d_s1_us) {
    // Collect series names and x points (one-way end-to-end latency in ms).
    std::vector<std::string> series;
    std::vector<SimTime> xs;
    for (const auto& r : s.rows) {
        std::string name = std::string(to_string(r.transport)) + "-b" +
                           std::to_string(r.b_rlc_bytes >> 20) + "MB";
        if (std::find(series.begin(), series.end(), name) == series.end()) {
            series.push_back(name);
        }
        if (std::find(xs.begin(), xs.end(), r.d_rs_us) == xs.end()) {
            xs.push_back(r.d_rs_us);
        }
    }
    std::sort(xs.begin(), xs.end());
    std::sort(series.begin(), series.end());

    auto emit = [&](std::ostream& os, bool goodput) {
        os << "# x_ms";
        for (const auto& name : series) {
            os << ' ' << name;
        }
        os << "\n";
        for (SimTime x : xs) {
            os << (d_s1_us + x) / 1000;
            for (const auto& name : series) {
                double v = 0;
                bool found = false;
                for (const auto& r : s.rows) {
                    std::string rn = std::string(to_string(r.transport)) + "-b" +
                                     std::to_string(r.b_rlc_bytes >> 20) + "MB";
                    if (rn == name && r.d_rs_us == x) {
                        v = goodput ? r.goodput_mean : r.latency_mean_us;
                        found = true;
                        break;
                    }
                }
                if (found) {
                    os << ' ' << fmt_double(v);
                } else {
                    os << " nan";
                }
            }
            os << "\n";
        }
    };
    emit(goodput_os, true);
    emit(latency_os, false);
}

// --- config file ------------------------------------------------------------

void apply_config_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
    auto as_u64 = [&] { return std::stoull(value); };
    auto as_i64 = [&] { return std::stoll(value); };
    auto as_d = [&] { return std::stod(value); };

    if (key == "gnb_x") cfg.gnb_x = as_d();
    else if (key == "gnb_y") cfg.gnb_y = as_d();
    else if (key == "ue_speed") cfg.ue_speed = as_d();
    else if (key == "obstacle_count") cfg.obstacle_count = static_cast<int>(as_i64());
    else if (key == "obstacle_region") {
        const auto p = split(value, ',');
        if (p.size() != 4) throw std::invalid_argument("obstacle_region needs x0,y0,x1,y1");
        cfg.obstacle_region = Rect{std::stod(p[0]), std::stod(p[1]), std::stod(p[2]), std::stod(p[3])};
    } else if (key == "los_rate_bps") cfg.los_rate_bps = as_d();
    else if (key == "nlos_rate_bps") cfg.nlos_rate_bps = as_d();
    else if (key == "outages") {
        cfg.outages.clear();
        if (!value.empty()) {
            for (const auto& iv : split(value, ';')) {
                const auto be = split(iv, '-');
                if (be.size() != 2) throw std::invalid_argument("outages: use begin-end;begin-end (us)");
                cfg.outages.push_back(OutageInterval{std::stoll(be[0]), std::stoll(be[1])});
            }
        }
    } else if (key == "d_s1_us") cfg.d_s1_us = as_i64();
    else if (key == "d_rs_us") cfg.d_rs_us = as_i64();
    else if (key == "b_rlc_bytes") cfg.b_rlc_bytes = as_u64();
    else if (key == "slot_us") cfg.slot_us = as_i64();
    else if (key == "uplink_delay_us") cfg.uplink_delay_us = as_i64();
    else if (key == "transport") cfg.transport = transport_from_string(value);
    else if (key == "mss1") cfg.mss1 = static_cast<std::uint32_t>(as_u64());
    else if (key == "mss2") cfg.mss2 = static_cast<std::uint32_t>(as_u64());
    else if (key == "receiver_window") cfg.receiver_window = as_u64();
    else if (key == "total_bytes") cfg.total_bytes = as_u64();
    else if (key == "udp_rate_bps") cfg.udp_rate_bps = as_d();
    else if (key == "proxy_buffer") cfg.proxy_buffer = as_u64();
    else if (key == "flush_timeout_us") cfg.flush_timeout_us = as_i64();
    else if (key == "policy") cfg.policy = value;
    else if (key.rfind("policy.", 0) == 0) cfg.policy_params[key.substr(7)] = value;
    else if (key == "d_info_us") cfg.bus.d_info_us = as_i64();
    else if (key == "t_info_us") cfg.bus.t_info_us = as_i64();
    else if (key == "seed") cfg.seed = as_u64();
    else if (key == "duration_us") cfg.duration_us = as_i64();
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file '" + path + "'");
    }
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        // trim
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) {
            continue;
        }
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        auto trim = [](std::string s) {
            const auto b2 = s.find_first_not_of(" \t");
            if (b2 == std::string::npos) return std::string();
            const auto e2 = s.find_last_not_of(" \t");
            return s.substr(b2, e2 - b2 + 1);
        };
        try {
            apply_config_kv(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const std::exception& ex) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + ex.what());
        }
    }
    return base;
}

} // namespace mprox
