#pragma once

#include <stdexcept>
#include <string>

#include "wlantp/numeric.hpp"

namespace wlantp {

enum class Standard { dot11b, dot11g };

inline const char* to_string(Standard s) {
    return s == Standard::dot11b ? "80211b" : "80211g";
}

// Standard-dependent MAC/PHY constants. Lengths are stored in bytes and
// converted to bits where they are divided by a rate; times are seconds.
struct PhyParams {
    double max_phy_rate_bps = 0.0;
    double control_rate_bps = 0.0;   // rate of RTS/CTS/MAC-ACK frames
    double preamble_s = 0.0;         // PLCP preamble; zero where the PHY
                                     // overhead figure already covers it
    double phy_header_s = 0.0;
    int mac_header_bytes = 0;
    int rts_bytes = 0;
    int cts_bytes = 0;
    int mac_ack_bytes = 0;
    int ip_header_bytes = 0;
    int tcp_header_bytes = 0;
    int tcp_ack_bytes = 0;           // whole TCP-ACK packet (header only)
    int tcp_payload_bytes = 0;
    double slot_s = 0.0;
    double difs_s = 0.0;
    double sifs_s = 0.0;
    double eifs_s = 0.0;
    int cw_min = 0;                  // slots
    int cw_max = 0;                  // slots
    // When set, an AP-involved collision is charged for the RTS frame the AP
    // actually sent (at the control rate) instead of a TCP-ACK sized frame.
    // Off by default; provided for sensitivity exploration only.
    bool collision_uses_rts_length = false;

    friend bool operator==(const PhyParams&, const PhyParams&) = default;
};

inline PhyParams standard_params(Standard standard) {
    PhyParams p;
    p.mac_header_bytes = 34;
    p.rts_bytes = 20;
    p.cts_bytes = 14;
    p.mac_ack_bytes = 14;
    p.ip_header_bytes = 20;
    p.tcp_header_bytes = 20;
    p.tcp_ack_bytes = 20;
    p.tcp_payload_bytes = 1460;
    p.sifs_s = 10e-6;
    p.eifs_s = 364e-6;
    p.cw_max = 1023;
    if (standard == Standard::dot11b) {
        p.max_phy_rate_bps = 11e6;
        p.control_rate_bps = 2e6;
        p.preamble_s = 144e-6;
        p.phy_header_s = 48e-6;
        p.slot_s = 20e-6;
        p.difs_s = 50e-6;
        p.cw_min = 31;
    } else {
        p.max_phy_rate_bps = 54e6;
        p.control_rate_bps = 6e6;
        p.preamble_s = 0.0;          // OFDM: folded into the PHY header time
        p.phy_header_s = 20e-6;
        p.slot_s = 9e-6;
        p.difs_s = 28e-6;
        p.cw_min = 15;
    }
    return p;
}

inline void validate(const PhyParams& p) {
    auto fail = [](const std::string& what) {
        throw std::invalid_argument("PhyParams: " + what);
    };
    if (p.max_phy_rate_bps <= 0) fail("max PHY rate must be positive");
    if (p.control_rate_bps <= 0) fail("control rate must be positive");
    if (p.preamble_s < 0) fail("preamble time must be nonnegative");
    if (p.phy_header_s <= 0 || p.slot_s <= 0 || p.difs_s <= 0 ||
        p.sifs_s <= 0 || p.eifs_s <= 0)
        fail("all times must be positive");
    if (p.cw_min >= p.cw_max) fail("cw_min must be less than cw_max");
    if (!is_power_of_two(static_cast<std::uint64_t>(p.cw_min) + 1) ||
        !is_power_of_two(static_cast<std::uint64_t>(p.cw_max) + 1))
        fail("cw_min+1 and cw_max+1 must be powers of two");
    if (p.tcp_payload_bytes <= p.tcp_ack_bytes)
        fail("TCP payload must exceed the TCP-ACK packet size");
}

namespace detail {
inline double bits(int bytes) { return 8.0 * bytes; }
inline void require_positive_rate(double rate_bps) {
    if (!(rate_bps > 0.0))
        throw std::invalid_argument("PHY rate must be positive, got " +
                                    std::to_string(rate_bps));
}
} // namespace detail

// Channel occupancy of one successful AP data transfer to a station at
// rate_bps: RTS/CTS handshake, the data frame, and the MAC-level ACK,
// each with its own preamble and PHY header, separated by SIFS and closed
// by DIFS. Control frames go at the control rate, the data frame at the
// station's rate.
inline double ap_success_time(const PhyParams& p, double rate_bps) {
    detail::require_positive_rate(rate_bps);
    const double pre = p.preamble_s + p.phy_header_s;
    const double data_bits = detail::bits(p.mac_header_bytes + p.ip_header_bytes +
                                          p.tcp_header_bytes + p.tcp_payload_bytes);
    return pre + detail::bits(p.rts_bytes) / p.control_rate_bps + p.sifs_s +
           pre + detail::bits(p.cts_bytes) / p.control_rate_bps + p.sifs_s +
           pre + data_bits / rate_bps + p.sifs_s +
           pre + detail::bits(p.mac_ack_bytes) / p.control_rate_bps + p.difs_s;
}

// Channel occupancy of one successful TCP-ACK transfer from a station at
// rate_bps: basic access (no RTS/CTS), the ACK frame and the MAC-level ACK.
inline double sta_success_time(const PhyParams& p, double rate_bps) {
    detail::require_positive_rate(rate_bps);
    const double pre = p.preamble_s + p.phy_header_s;
    const double frame_bits = detail::bits(p.mac_header_bytes + p.ip_header_bytes +
                                           p.tcp_ack_bytes);
    return pre + frame_bits / rate_bps + p.sifs_s +
           pre + detail::bits(p.mac_ack_bytes) / rate_bps + p.difs_s;
}

// Collision involving only stations whose slowest participant is at rate_bps.
inline double sta_collision_time(const PhyParams& p, double rate_bps) {
    detail::require_positive_rate(rate_bps);
    const double frame_bits = detail::bits(p.mac_header_bytes + p.ip_header_bytes +
                                           p.tcp_ack_bytes);
    return p.preamble_s + p.phy_header_s + frame_bits / rate_bps + p.eifs_s;
}

// Collision involving the AP while addressing a station at rate_bps.
inline double ap_collision_time(const PhyParams& p, double rate_bps) {
    detail::require_positive_rate(rate_bps);
    if (p.collision_uses_rts_length)
        return p.preamble_s + p.phy_header_s +
               detail::bits(p.rts_bytes) / p.control_rate_bps + p.eifs_s;
    return sta_collision_time(p, rate_bps);
}

} // namespace wlantp
