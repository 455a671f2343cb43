#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wlantp/phy.hpp"

namespace wlantp {

// One association-rate class: m stations downloading at PHY rate r.
struct RateClass {
    double rate_bps = 0.0;
    int count = 0;

    friend bool operator==(const RateClass&, const RateClass&) = default;
};

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    Standard standard = Standard::dot11b;
    std::vector<RateClass> classes;     // strictly descending rate after validation
    int delayed_ack = 1;                // TCP-ACK generated every d-th data packet
    std::optional<int> n_max;           // truncation override for the analysis
    std::string label;

    int station_count() const {
        int m = 0;
        for (const auto& c : classes) m += c.count;
        return m;
    }

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Sorts classes to descending rate and checks every invariant the rest of the
// project relies on. Unsorted input is accepted; everything else is strict.
inline void validate(ScenarioConfig& cfg) {
    if (cfg.classes.empty())
        throw ScenarioError("scenario '" + cfg.label + "': classes must be nonempty");
    std::stable_sort(cfg.classes.begin(), cfg.classes.end(),
                     [](const RateClass& a, const RateClass& b) {
                         return a.rate_bps > b.rate_bps;
                     });
    for (std::size_t i = 0; i < cfg.classes.size(); ++i) {
        if (!(cfg.classes[i].rate_bps > 0.0))
            throw ScenarioError("scenario '" + cfg.label + "': rates must be positive");
        if (cfg.classes[i].count <= 0)
            throw ScenarioError("scenario '" + cfg.label + "': station counts must be positive");
        if (i > 0 && cfg.classes[i].rate_bps == cfg.classes[i - 1].rate_bps)
            throw ScenarioError("scenario '" + cfg.label + "': duplicate rate " +
                                std::to_string(cfg.classes[i].rate_bps / 1e6) + " Mbps");
    }
    if (cfg.delayed_ack < 1)
        throw ScenarioError("scenario '" + cfg.label + "': d must be >= 1");
    if (cfg.n_max && *cfg.n_max < 0)
        throw ScenarioError("scenario '" + cfg.label + "': n_max must be >= 0");
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

inline Standard parse_standard(const std::string& v) {
    if (v == "80211b" || v == "802.11b" || v == "b") return Standard::dot11b;
    if (v == "80211g" || v == "802.11g" || v == "g") return Standard::dot11g;
    throw ScenarioError("unknown standard '" + v + "' (expected 80211b or 80211g)");
}

inline double parse_number(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ScenarioError("key '" + key + "': expected a number, got '" + v + "'");
    }
    if (pos != v.size())
        throw ScenarioError("key '" + key + "': trailing junk in '" + v + "'");
    return x;
}

inline int parse_int(const std::string& key, const std::string& v) {
    const double x = parse_number(key, v);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
        throw ScenarioError("key '" + key + "': expected an integer, got '" + v + "'");
    return i;
}

inline std::string parse_string(const std::string& v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
        return v.substr(1, v.size() - 2);
    return v;  // bare values allowed
}

} // namespace detail

// Scenario files are a small line-oriented TOML subset:
//
//   label = "Table 1, row 1"
//   standard = "80211b"
//   d = 1
//   n_max = 30            # optional
//
//   [[class]]
//   rate_mbps = 11
//   count = 2
//
// Rates are given in Mbps and normalized to bits/s.
inline ScenarioConfig parse_scenario(std::istream& in) {
    ScenarioConfig cfg;
    bool in_class = false;
    RateClass current;
    bool have_rate = false, have_count = false;

    auto flush_class = [&](int line_no) {
        if (!in_class) return;
        if (!have_rate || !have_count)
            throw ScenarioError("line " + std::to_string(line_no) +
                                ": [[class]] needs both rate_mbps and count");
        cfg.classes.push_back(current);
        current = RateClass{};
        have_rate = have_count = false;
    };

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = detail::trim(detail::strip_comment(raw));
        if (line.empty()) continue;

        if (line == "[[class]]") {
            flush_class(line_no);
            in_class = true;
            continue;
        }
        if (line.front() == '[')
            throw ScenarioError("line " + std::to_string(line_no) +
                                ": unknown section '" + line + "'");

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioError("line " + std::to_string(line_no) +
                                ": expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (value.empty())
            throw ScenarioError("line " + std::to_string(line_no) +
                                ": empty value for '" + key + "'");

        if (in_class) {
            if (key == "rate_mbps") {
                current.rate_bps = detail::parse_number(key, value) * 1e6;
                have_rate = true;
            } else if (key == "count") {
                current.count = detail::parse_int(key, value);
                have_count = true;
            } else {
                throw ScenarioError("line " + std::to_string(line_no) +
                                    ": unknown class key '" + key + "'");
            }
        } else {
            if (key == "label") cfg.label = detail::parse_string(value);
            else if (key == "standard") cfg.standard = detail::parse_standard(detail::parse_string(value));
            else if (key == "d") cfg.delayed_ack = detail::parse_int(key, value);
            else if (key == "n_max") cfg.n_max = detail::parse_int(key, value);
            else
                throw ScenarioError("line " + std::to_string(line_no) +
                                    ": unknown key '" + key + "'");
        }
    }
    flush_class(line_no);
    validate(cfg);
    return cfg;
}

inline ScenarioConfig parse_scenario(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in);
}

// Resolves a path against WLANTP_SCENARIO_DIR when it does not exist as given.
inline std::filesystem::path resolve_scenario_path(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    if (fs::exists(path) || path.is_absolute()) return path;
    if (const char* dir = std::getenv("WLANTP_SCENARIO_DIR")) {
        const fs::path candidate = fs::path(dir) / path;
        if (fs::exists(candidate)) return candidate;
    }
    return path;
}

inline ScenarioConfig load_scenario(const std::filesystem::path& path) {
    const auto resolved = resolve_scenario_path(path);
    std::ifstream in(resolved);
    if (!in)
        throw ScenarioError("cannot open scenario file '" + resolved.string() + "'");
    try {
        ScenarioConfig cfg = parse_scenario(in);
        if (cfg.label.empty()) cfg.label = resolved.stem().string();
        return cfg;
    } catch (const ScenarioError& e) {
        throw ScenarioError(resolved.string() + ": " + e.what());
    }
}

inline std::string serialize_scenario(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "label = \"" << cfg.label << "\"\n";
    out << "standard = \"" << to_string(cfg.standard) << "\"\n";
    out << "d = " << cfg.delayed_ack << "\n";
    if (cfg.n_max) out << "n_max = " << *cfg.n_max << "\n";
    for (const auto& c : cfg.classes) {
        out << "\n[[class]]\n";
        out << "rate_mbps = " << c.rate_bps / 1e6 << "\n";
        out << "count = " << c.count << "\n";
    }
    return out.str();
}

} // namespace wlantp
