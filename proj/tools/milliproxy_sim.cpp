#include "mprox/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

void apply_overrides(mprox::RunConfig& cfg, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        }
        mprox::apply_config_kv(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
}

void print_metrics(const mprox::RunMetrics& m) {
    std::cout << "goodput_bps=" << m.goodput_bps << "\n"
              << "delivered_bytes=" << m.delivered_bytes << "\n"
              << "mean_ran_latency_us=" << m.mean_ran_latency_us << "\n"
              << "max_ran_latency_us=" << m.max_ran_latency_us << "\n"
              << "latency_samples=" << m.latency_samples << "\n"
              << "rlc_drops=" << m.rlc_drops << "\n"
              << "proxy_drops=" << m.proxy_drops << "\n"
              << "mean_rlc_occupancy=" << m.mean_rlc_occupancy << "\n"
              << "digest_ok=" << (m.digest_ok ? 1 : 0) << "\n"
              << "semantics_ok=" << (m.semantics_ok ? 1 : 0) << "\n"
              << "clamp_violations=" << m.clamp_violations << "\n"
              << "rto_count=" << m.rto_count << "\n"
              << "trace_hash=" << m.trace_hash << "\n";
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    return os;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"milliProxy mmWave proxy/transport simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;

    auto* run = app.add_subcommand("run", "execute a single seeded run");
    run->add_option("--config", config_path, "key=value config file");
    run->add_option("--set", sets, "override a config key (key=value, repeatable)");

    auto* sweep = app.add_subcommand("sweep", "run the delay/buffer/transport grid");
    std::string runs_out = "runs.csv";
    std::string summary_out = "summary.csv";
    unsigned threads = 1;
    std::vector<std::int64_t> drs_ms{1, 5, 10, 20};
    std::vector<std::uint64_t> buffer_mb{10, 20};
    int seeds = 50;
    std::uint64_t first_seed = 1;
    sweep->add_option("--config", config_path, "key=value base config file");
    sweep->add_option("--set", sets, "override a base-config key (repeatable)");
    sweep->add_option("--out", runs_out, "per-run CSV output path");
    sweep->add_option("--summary", summary_out, "per-config summary CSV path");
    sweep->add_option("--threads", threads, "worker threads");
    sweep->add_option("--drs-ms", drs_ms, "core delay D_RS values, ms");
    sweep->add_option("--buffer-mb", buffer_mb, "RLC buffer sizes, MiB");
    sweep->add_option("--seeds", seeds, "seeds per cell");
    sweep->add_option("--first-seed", first_seed, "first seed value");

    auto* plot = app.add_subcommand("plot", "summarize a runs CSV into plot data");
    std::string runs_in;
    std::string goodput_out = "goodput.dat";
    std::string latency_out = "latency.dat";
    std::string plot_summary_out;
    std::int64_t d_s1_us = 1000;
    plot->add_option("--runs", runs_in, "runs CSV produced by sweep")->required();
    plot->add_option("--goodput-out", goodput_out, "goodput plot data path");
    plot->add_option("--latency-out", latency_out, "latency plot data path");
    plot->add_option("--summary-out", plot_summary_out, "also write a summary CSV here");
    plot->add_option("--d-s1-us", d_s1_us, "fixed server-side delay added to the x axis");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            mprox::RunConfig cfg;
            if (!config_path.empty()) {
                cfg = mprox::parse_config_file(config_path, cfg);
            }
            apply_overrides(cfg, sets);
            print_metrics(mprox::run_one(cfg));
        } else if (sweep->parsed()) {
            mprox::SweepGrid grid;
            if (!config_path.empty()) {
                grid.base = mprox::parse_config_file(config_path, grid.base);
            }
            apply_overrides(grid.base, sets);
            grid.d_rs_us.clear();
            for (auto ms : drs_ms) grid.d_rs_us.push_back(ms * 1000);
            grid.b_rlc_bytes.clear();
            for (auto mb : buffer_mb) grid.b_rlc_bytes.push_back(mb << 20);
            grid.seeds = seeds;
            grid.first_seed = first_seed;

            const auto rows = mprox::run_sweep(grid, threads, &std::cerr);
            auto runs_os = open_out(runs_out);
            mprox::write_runs_csv(runs_os, rows);
            auto summary_os = open_out(summary_out);
            mprox::write_summary_csv(summary_os, mprox::summarize(rows));
            std::cout << rows.size() << " runs -> " << runs_out << ", " << summary_out << "\n";
        } else if (plot->parsed()) {
            std::ifstream is(runs_in);
            if (!is) {
                throw std::runtime_error("cannot open '" + runs_in + "'");
            }
            const auto summary = mprox::summarize(mprox::read_runs_csv(is));
            auto gp = open_out(goodput_out);
            auto lat = open_out(latency_out);
            mprox::write_plot_data(gp, lat, summary, d_s1_us);
            if (!plot_summary_out.empty()) {
                auto sos = open_out(plot_summary_out);
                mprox::write_summary_csv(sos, summary);
            }
            std::cout << "wrote " << goodput_out << " and " << latency_out << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
