#pragma once

#include <array>

#include "wlantp/scenario.hpp"

namespace wlantp::fixtures {

// 802.11b reference scenarios: 4 rate classes (11, 5.5, 2, 1 Mbps).
inline ScenarioConfig dot11b_mix(std::array<int, 4> counts, int d, std::string label) {
    ScenarioConfig cfg;
    cfg.standard = Standard::dot11b;
    cfg.delayed_ack = d;
    cfg.label = std::move(label);
    cfg.classes = {{11e6, counts[0]}, {5.5e6, counts[1]}, {2e6, counts[2]}, {1e6, counts[3]}};
    validate(cfg);
    return cfg;
}

// 802.11g reference scenarios: 6 rate classes (54, 48, 36, 24, 18, 6 Mbps).
inline ScenarioConfig dot11g_mix(std::array<int, 6> counts, int d, std::string label) {
    ScenarioConfig cfg;
    cfg.standard = Standard::dot11g;
    cfg.delayed_ack = d;
    cfg.label = std::move(label);
    const double rates[6] = {54e6, 48e6, 36e6, 24e6, 18e6, 6e6};
    for (int i = 0; i < 6; ++i)
        cfg.classes.push_back({rates[i], counts[static_cast<std::size_t>(i)]});
    validate(cfg);
    return cfg;
}

inline const std::array<std::array<int, 4>, 4> kDot11bCounts = {{
    {2, 3, 2, 3}, {1, 2, 3, 4}, {2, 2, 4, 4}, {4, 4, 2, 2}}};

inline const std::array<std::array<int, 6>, 6> kDot11gCounts = {{
    {1, 2, 3, 4, 2, 3}, {2, 1, 3, 4, 2, 3}, {3, 2, 1, 4, 2, 3},
    {4, 3, 2, 1, 3, 2}, {3, 2, 4, 3, 1, 2}, {3, 2, 4, 3, 2, 1}}};

// Published reference throughput values [Mbps] the acceptance suite reports
// against, in fixture row order.
inline const std::array<double, 4> kDot11bReferenceD1 = {1.0569, 0.8397, 0.9167, 1.4667};
inline const std::array<double, 4> kDot11bReferenceD2 = {1.1221, 0.8889, 0.9715, 1.5647};
inline const std::array<double, 6> kDot11gReferenceD1 = {8.14, 8.16, 8.31, 10.22, 10.38, 12.27};

inline ScenarioConfig dot11b_row(int row, int d) {
    return dot11b_mix(kDot11bCounts[static_cast<std::size_t>(row)], d,
                      "80211b row " + std::to_string(row + 1) + " d=" + std::to_string(d));
}

inline ScenarioConfig dot11g_row(int row, int d) {
    return dot11g_mix(kDot11gCounts[static_cast<std::size_t>(row)], d,
                      "80211g row " + std::to_string(row + 1) + " d=" + std::to_string(d));
}

} // namespace wlantp::fixtures
