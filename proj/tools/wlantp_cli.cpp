// wlantp: throughput analysis and simulation of TCP downloads over a
// multirate 802.11 WLAN.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 computation error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wlantp/dtmc.hpp"
#include "wlantp/report.hpp"
#include "wlantp/scenario.hpp"
#include "wlantp/sim.hpp"
#include "wlantp/throughput.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCompute = 3;

struct CommonOptions {
    std::string scenario_path;
    std::string format = "human";
    std::optional<int> n_max;
    bool collision_uses_rts = false;
    std::string ack_chain = "per-d";
};

wlantp::AnalysisOptions analysis_options(const CommonOptions& common) {
    wlantp::AnalysisOptions opt;
    opt.n_max = common.n_max;
    opt.collision_uses_rts_length = common.collision_uses_rts;
    if (common.ack_chain == "per-d")
        opt.ack_chain = wlantp::AckChainModel::ack_per_d_packets;
    else if (common.ack_chain == "per-packet")
        opt.ack_chain = wlantp::AckChainModel::ack_per_packet;
    else
        throw wlantp::ScenarioError("unknown --ack-chain '" + common.ack_chain +
                                    "' (expected per-d or per-packet)");
    return opt;
}

void add_common(CLI::App* cmd, CommonOptions& common) {
    cmd->add_option("scenario", common.scenario_path,
                    "Scenario file (resolved against $WLANTP_SCENARIO_DIR)")
        ->required();
    cmd->add_option("--format", common.format, "Output format: human, csv or json")
        ->default_val("human");
    cmd->add_option("--n-max", common.n_max,
                    "State-space truncation override for the analysis");
    cmd->add_flag("--collision-uses-rts-length", common.collision_uses_rts,
                  "Charge AP-involved collisions for the RTS frame instead of a "
                  "TCP-ACK sized frame");
    cmd->add_option("--ack-chain", common.ack_chain,
                    "Pending-ACK chain: per-d (one pending entry per d packets, "
                    "default) or per-packet")
        ->default_val("per-d");
}

struct SimFlags {
    std::uint64_t seed = 1;
    double duration = 60.0;
    double warmup = 5.0;
    int window = 40;
    std::string trace_path;
};

void add_sim_flags(CLI::App* cmd, SimFlags& flags, bool with_trace) {
    cmd->add_option("--seed", flags.seed, "Simulation seed")->default_val(1);
    cmd->add_option("--duration", flags.duration, "Simulated seconds")->default_val(60.0);
    cmd->add_option("--warmup", flags.warmup, "Warmup seconds excluded from measurement")
        ->default_val(5.0);
    cmd->add_option("--window", flags.window, "TCP window per connection, packets")
        ->default_val(40);
    if (with_trace)
        cmd->add_option("--trace", flags.trace_path,
                        "Write a line-per-event channel trace to this file");
}

wlantp::SimConfig sim_config(const wlantp::ScenarioConfig& scenario,
                             const CommonOptions& common, const SimFlags& flags) {
    wlantp::SimConfig cfg;
    cfg.scenario = scenario;
    cfg.seed = flags.seed;
    cfg.duration_s = flags.duration;
    cfg.warmup_s = flags.warmup;
    cfg.tcp_window = flags.window;
    cfg.collision_uses_rts_length = common.collision_uses_rts;
    return cfg;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::stringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) values.push_back(std::stoi(token));
    if (values.empty()) throw wlantp::ScenarioError("empty value list");
    return values;
}

std::vector<std::vector<int>> parse_count_sets(const std::string& text) {
    std::vector<std::vector<int>> sets;
    std::stringstream in(text);
    std::string group;
    while (std::getline(in, group, ';')) {
        std::vector<int> counts;
        std::stringstream gin(group);
        std::string token;
        while (std::getline(gin, token, ':')) counts.push_back(std::stoi(token));
        sets.push_back(std::move(counts));
    }
    if (sets.empty()) throw wlantp::ScenarioError("empty counts list");
    return sets;
}

void emit_rows(const std::vector<wlantp::ComparisonRow>& rows,
               const std::vector<nlohmann::json>& reports, const std::string& format) {
    switch (wlantp::parse_format(format)) {
        case wlantp::OutputFormat::human:
            wlantp::render_human(std::cout, rows);
            break;
        case wlantp::OutputFormat::csv:
            wlantp::render_csv(std::cout, rows);
            break;
        case wlantp::OutputFormat::json:
            std::cout << nlohmann::json(reports).dump(2) << '\n';
            break;
    }
}

int run_analyze(const CommonOptions& common, const SimFlags& flags, bool with_sim,
                bool with_verify, const std::string& sweep_spec) {
    const auto scenario = wlantp::load_scenario(common.scenario_path);
    const auto options = analysis_options(common);

    std::vector<wlantp::ThroughputReport> reports;
    if (!sweep_spec.empty()) {
        const auto eq = sweep_spec.find('=');
        if (eq == std::string::npos)
            throw wlantp::ScenarioError("--sweep expects AXIS=VALUES, got '" + sweep_spec + "'");
        const std::string axis = sweep_spec.substr(0, eq);
        const std::string values = sweep_spec.substr(eq + 1);
        if (axis == "d") {
            const auto d_values = parse_int_list(values);
            reports = wlantp::sweep_delayed_ack(scenario, d_values, options);
        } else if (axis == "n_max") {
            const auto n_values = parse_int_list(values);
            reports = wlantp::sweep_truncation(scenario, n_values, options);
        } else if (axis == "counts") {
            const auto count_sets = parse_count_sets(values);
            reports = wlantp::sweep_counts(scenario, count_sets, options);
        } else {
            throw wlantp::ScenarioError("unknown sweep axis '" + axis +
                                        "' (expected d, n_max or counts)");
        }
    } else {
        reports.push_back(wlantp::aggregate_throughput(scenario, options));
    }

    std::vector<wlantp::ComparisonRow> rows;
    std::vector<nlohmann::json> payloads;
    std::uint64_t seed = flags.seed;
    for (const auto& report : reports) {
        nlohmann::json payload = {{"analysis", wlantp::to_json(report)}};
        if (with_sim) {
            wlantp::ScenarioConfig sim_scenario = scenario;
            sim_scenario.delayed_ack = report.delayed_ack;
            sim_scenario.classes = report.classes;
            auto cfg = sim_config(sim_scenario, common, flags);
            cfg.seed = seed++;
            const auto sim = wlantp::run_simulation(cfg);
            rows.push_back(wlantp::ComparisonRow::from(report, &sim));
            payload["simulation"] = wlantp::to_json(sim);
            payload["error_percent"] = *rows.back().error_percent;
        } else {
            rows.push_back(wlantp::ComparisonRow::from(report));
        }
        if (with_verify) {
            const int d = report.delayed_ack;
            std::vector<int> counts;
            for (const auto& c : report.classes) counts.push_back(c.count);
            const auto mix = wlantp::MixProbabilities::from_counts(counts);
            const int n_max = std::min(report.n_max, 12);
            double worst = 0.0;
            for (const auto model : {wlantp::AckChainModel::ack_per_packet,
                                     wlantp::AckChainModel::ack_per_d_packets}) {
                const auto tm = wlantp::build_transitions(mix, d, n_max, model);
                const auto solved = wlantp::solve_stationary(tm, 1e-9);
                const double load = wlantp::ack_chain_load(model, d);
                double z = 0.0, l1 = 0.0;
                std::vector<double> closed(tm.states.size());
                for (std::size_t i = 0; i < tm.states.size(); ++i) {
                    closed[i] = wlantp::pi_unnormalized(tm.states[i], mix, load);
                    z += closed[i];
                }
                for (std::size_t i = 0; i < tm.states.size(); ++i)
                    l1 += std::fabs(solved[i] - closed[i] / z);
                worst = std::max(worst, l1);
            }
            payload["verify_l1"] = worst;
            if (wlantp::parse_format(common.format) == wlantp::OutputFormat::human)
                std::cout << report.label << ": stationary closed form vs matrix solve, "
                          << "L1 = " << worst << " (n_max " << n_max << ")\n";
        }
        payloads.push_back(std::move(payload));
    }
    emit_rows(rows, payloads, common.format);
    return kExitOk;
}

int run_simulate(const CommonOptions& common, const SimFlags& flags) {
    const auto scenario = wlantp::load_scenario(common.scenario_path);
    auto cfg = sim_config(scenario, common, flags);
    std::ofstream trace_file;
    if (!flags.trace_path.empty()) {
        trace_file.open(flags.trace_path);
        if (!trace_file)
            throw wlantp::ScenarioError("cannot open trace file '" + flags.trace_path + "'");
        cfg.trace = &trace_file;
    }
    const auto sim = wlantp::run_simulation(cfg);

    switch (wlantp::parse_format(common.format)) {
        case wlantp::OutputFormat::human: {
            std::cout << scenario.label << ": " << std::fixed << std::setprecision(4)
                      << sim.aggregate_mbps << " Mbps +/- " << sim.ci_halfwidth_mbps
                      << " (95% CI), " << std::setprecision(2)
                      << 100.0 * sim.collision_fraction << "% collisions, mean pending ACKs "
                      << sim.mean_pending_acks << "\n";
            std::cout << "per-station Mbps:";
            for (double v : sim.per_sta_mbps)
                std::cout << ' ' << std::setprecision(4) << v;
            std::cout << '\n';
            break;
        }
        case wlantp::OutputFormat::csv: {
            std::cout << "label,aggregate_mbps,ci_halfwidth_mbps,collision_fraction,"
                         "mean_pending_acks,seed\n";
            std::cout << '"' << scenario.label << "\"," << std::setprecision(10)
                      << sim.aggregate_mbps << ',' << sim.ci_halfwidth_mbps << ','
                      << sim.collision_fraction << ',' << sim.mean_pending_acks << ','
                      << flags.seed << '\n';
            break;
        }
        case wlantp::OutputFormat::json:
            std::cout << wlantp::to_json(sim).dump(2) << '\n';
            break;
    }
    return kExitOk;
}

int run_verify(const CommonOptions& common, double tol) {
    const auto scenario = wlantp::load_scenario(common.scenario_path);
    std::vector<int> counts;
    for (const auto& c : scenario.classes) counts.push_back(c.count);
    const auto mix = wlantp::MixProbabilities::from_counts(counts);
    const int n_max = common.n_max.value_or(12);

    nlohmann::json payload = {{"label", scenario.label}, {"n_max", n_max}};
    bool ok = true;
    for (const auto model : {wlantp::AckChainModel::ack_per_packet,
                             wlantp::AckChainModel::ack_per_d_packets}) {
        const auto tm =
            wlantp::build_transitions(mix, scenario.delayed_ack, n_max, model);
        const auto solved = wlantp::solve_stationary(tm, 1e-9);
        const double load = wlantp::ack_chain_load(model, scenario.delayed_ack);
        double z = 0.0, l1 = 0.0;
        std::vector<double> closed(tm.states.size());
        for (std::size_t i = 0; i < tm.states.size(); ++i) {
            closed[i] = wlantp::pi_unnormalized(tm.states[i], mix, load);
            z += closed[i];
        }
        for (std::size_t i = 0; i < tm.states.size(); ++i)
            l1 += std::fabs(solved[i] - closed[i] / z);
        const char* name =
            model == wlantp::AckChainModel::ack_per_packet ? "per-packet" : "per-d";
        payload[std::string("l1_") + name] = l1;
        payload["states"] = tm.states.size();
        ok = ok && l1 < tol;
        if (wlantp::parse_format(common.format) == wlantp::OutputFormat::human)
            std::cout << scenario.label << " [" << name << " chain]: " << tm.states.size()
                      << " states, L1(closed form, matrix solve) = " << l1 << '\n';
    }
    payload["pass"] = ok;
    payload["tolerance"] = tol;
    if (wlantp::parse_format(common.format) == wlantp::OutputFormat::json)
        std::cout << payload.dump(2) << '\n';
    else if (wlantp::parse_format(common.format) == wlantp::OutputFormat::csv)
        std::cout << "label,pass\n\"" << scenario.label << "\"," << (ok ? 1 : 0) << '\n';
    else
        std::cout << (ok ? "agreement within tolerance " : "DISAGREEMENT beyond tolerance ")
                  << tol << '\n';
    return ok ? kExitOk : kExitCompute;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"TCP download throughput for multirate 802.11 WLANs: "
                 "product-form analysis, matrix verification and slot-level "
                 "simulation"};
    app.require_subcommand(1);

    CommonOptions analyze_common, simulate_common, verify_common, sweep_common;
    SimFlags analyze_sim, simulate_flags;
    bool analyze_with_sim = false, analyze_with_verify = false;
    std::string analyze_sweep;
    double verify_tol = 1e-6;
    std::string sweep_axis, sweep_values;

    CLI::App* analyze = app.add_subcommand(
        "analyze", "Analytic throughput for a scenario, optional simulation columns");
    add_common(analyze, analyze_common);
    add_sim_flags(analyze, analyze_sim, false);
    analyze->add_flag("--simulate", analyze_with_sim,
                      "Also run the slot-level simulation and report the error column");
    analyze->add_flag("--verify", analyze_with_verify,
                      "Also cross-check the stationary distribution against a "
                      "transition-matrix solve");
    analyze->add_option("--sweep", analyze_sweep,
                        "Sweep an axis: d=1,2 | n_max=10,20,30 | counts=2:3:2:3;4:4:2:2");

    CLI::App* simulate =
        app.add_subcommand("simulate", "Slot-level DCF simulation of a scenario");
    add_common(simulate, simulate_common);
    add_sim_flags(simulate, simulate_flags, true);

    CLI::App* verify = app.add_subcommand(
        "verify", "Check the closed-form stationary distribution against a "
                  "numeric transition-matrix solve");
    add_common(verify, verify_common);
    verify->add_option("--tol", verify_tol, "L1 agreement tolerance")->default_val(1e-6);

    CLI::App* sweep = app.add_subcommand("sweep", "Sweep one axis of a scenario");
    add_common(sweep, sweep_common);
    sweep->add_option("--axis", sweep_axis, "Sweep axis: d, n_max or counts")->required();
    sweep->add_option("--values", sweep_values,
                      "Axis values, e.g. 1,2 or 10,20,30 or 2:3:2:3;4:4:2:2")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (analyze->parsed())
            return run_analyze(analyze_common, analyze_sim, analyze_with_sim,
                               analyze_with_verify, analyze_sweep);
        if (simulate->parsed()) return run_simulate(simulate_common, simulate_flags);
        if (verify->parsed()) return run_verify(verify_common, verify_tol);
        if (sweep->parsed())
            return run_analyze(sweep_common, SimFlags{}, false, false,
                               sweep_axis + "=" + sweep_values);
    } catch (const wlantp::ScenarioError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "computation error: " << e.what() << '\n';
        return kExitCompute;
    }
    return kExitConfig;
}
