#pragma once

#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlantp/sim.hpp"
#include "wlantp/throughput.hpp"

namespace wlantp {

// One line of an analysis/simulation comparison table.
struct ComparisonRow {
    std::string label;
    double analysis_mbps = 0.0;
    std::optional<double> simulation_mbps;
    std::optional<double> error_percent;  // |analysis - sim| / sim * 100

    static ComparisonRow from(const ThroughputReport& report,
                              const SimResult* sim = nullptr) {
        ComparisonRow row;
        row.label = report.label;
        row.analysis_mbps = report.aggregate_mbps;
        if (sim) {
            row.simulation_mbps = sim->aggregate_mbps;
            row.error_percent = 100.0 *
                                std::fabs(report.aggregate_mbps - sim->aggregate_mbps) /
                                sim->aggregate_mbps;
        }
        return row;
    }
};

enum class OutputFormat { human, csv, json };

inline OutputFormat parse_format(const std::string& name) {
    if (name == "human") return OutputFormat::human;
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw std::invalid_argument("unknown output format '" + name +
                                "' (expected human, csv or json)");
}

inline void render_human(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    std::size_t label_width = 8;
    for (const auto& row : rows) label_width = std::max(label_width, row.label.size());
    out << std::left << std::setw(static_cast<int>(label_width) + 2) << "scenario"
        << std::right << std::setw(16) << "analysis [Mbps]" << std::setw(18)
        << "simulation [Mbps]" << std::setw(10) << "error %" << '\n';
    out << std::string(label_width + 2 + 16 + 18 + 10, '-') << '\n';
    out << std::fixed << std::setprecision(4);
    for (const auto& row : rows) {
        out << std::left << std::setw(static_cast<int>(label_width) + 2) << row.label
            << std::right << std::setw(16) << row.analysis_mbps;
        if (row.simulation_mbps)
            out << std::setw(18) << *row.simulation_mbps << std::setw(10)
                << std::setprecision(2) << *row.error_percent << std::setprecision(4);
        else
            out << std::setw(18) << "-" << std::setw(10) << "-";
        out << '\n';
    }
    out.unsetf(std::ios::fixed);
}

inline void render_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    out << "label,analysis_mbps,simulation_mbps,error_percent\n";
    out << std::setprecision(10);
    for (const auto& row : rows) {
        out << '"' << row.label << "\"," << row.analysis_mbps << ',';
        if (row.simulation_mbps) out << *row.simulation_mbps;
        out << ',';
        if (row.error_percent) out << *row.error_percent;
        out << '\n';
    }
}

inline nlohmann::json to_json(const ThroughputReport& report) {
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& c : report.classes)
        classes.push_back({{"rate_mbps", c.rate_bps / 1e6}, {"count", c.count}});
    return nlohmann::json{
        {"label", report.label},
        {"standard", to_string(report.standard)},
        {"d", report.delayed_ack},
        {"classes", classes},
        {"n_max", report.n_max},
        {"captured_mass", report.captured_mass},
        {"ack_load", report.ack_load},
        {"packets_per_s", report.packets_per_s},
        {"aggregate_mbps", report.aggregate_mbps},
        {"per_sta_mbps", report.per_sta_mbps},
        {"per_class_mbps", report.per_class_mbps},
        {"reward_mean", report.reward_mean},
        {"mean_cycle_s", report.mean_cycle_s},
        {"mean_backlogged_stas", report.mean_backlogged_stas},
    };
}

inline nlohmann::json to_json(const SimResult& sim) {
    return nlohmann::json{
        {"aggregate_mbps", sim.aggregate_mbps},
        {"per_sta_mbps", sim.per_sta_mbps},
        {"ci_halfwidth_mbps", sim.ci_halfwidth_mbps},
        {"collision_fraction", sim.collision_fraction},
        {"mean_nonempty_stas", sim.mean_nonempty_stas},
        {"mean_pending_acks", sim.mean_pending_acks},
        {"measured_time_s", sim.measured_time_s},
        {"idle_slots", sim.idle_slots},
        {"ap_successes", sim.ap_successes},
        {"sta_successes", sim.sta_successes},
        {"collisions", sim.collisions},
        {"data_packets_delivered", sim.data_packets_delivered},
        {"acks_generated", sim.acks_generated},
    };
}

} // namespace wlantp
