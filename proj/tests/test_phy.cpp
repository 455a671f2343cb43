#include <catch2/catch.hpp>

#include "wlantp/phy.hpp"

using namespace wlantp;

namespace {

PhyParams zero_params() {
    PhyParams p;
    p.control_rate_bps = 1.0;  // only used as a divisor of zero-length frames
    return p;
}

const double kRatesB[] = {11e6, 5.5e6, 2e6, 1e6};
const double kRatesG[] = {54e6, 48e6, 36e6, 24e6, 18e6, 12e6, 6e6};

} // namespace

TEST_CASE("802.11b constants") {
    const PhyParams p = standard_params(Standard::dot11b);
    CHECK(p.slot_s == 20e-6);
    CHECK(p.difs_s == 50e-6);
    CHECK(p.sifs_s == 10e-6);
    CHECK(p.eifs_s == 364e-6);
    CHECK(p.preamble_s == 144e-6);
    CHECK(p.phy_header_s == 48e-6);
    CHECK(p.cw_min == 31);
    CHECK(p.cw_max == 1023);
    CHECK(p.control_rate_bps == 2e6);
    CHECK(p.max_phy_rate_bps == 11e6);
    CHECK(p.tcp_payload_bytes == 1460);
    CHECK(p.tcp_ack_bytes == 20);
    CHECK(p.mac_header_bytes == 34);
    CHECK_NOTHROW(validate(p));
}

TEST_CASE("802.11g constants") {
    const PhyParams p = standard_params(Standard::dot11g);
    CHECK(p.slot_s == 9e-6);
    CHECK(p.difs_s == 28e-6);
    CHECK(p.cw_min == 15);
    CHECK(p.phy_header_s == 20e-6);
    CHECK(p.preamble_s == 0.0);  // PHY overhead figure covers the preamble
    CHECK(p.control_rate_bps == 6e6);
    CHECK(p.tcp_payload_bytes == 1460);
    CHECK_NOTHROW(validate(p));
}

TEST_CASE("standard_params is referentially transparent") {
    CHECK(standard_params(Standard::dot11b) == standard_params(Standard::dot11b));
    CHECK(standard_params(Standard::dot11g) == standard_params(Standard::dot11g));
}

TEST_CASE("AP data exchange duration, hand-computed fixtures") {
    const PhyParams b = standard_params(Standard::dot11b);
    // 4 preambles (192us each) + RTS 80us + CTS 56us + MAC-ACK 56us
    // + 3 SIFS + DIFS = 1040us fixed, plus 12272 bits of data frame at rate.
    CHECK(ap_success_time(b, 11e6) ==
          Approx(1040e-6 + 12272.0 / 11e6).epsilon(1e-12));
    CHECK(ap_success_time(b, 11e6) == Approx(2155.6363636363637e-6).epsilon(1e-12));
    CHECK(ap_success_time(b, 1e6) == Approx(13312e-6).epsilon(1e-12));

    const PhyParams g = standard_params(Standard::dot11g);
    // 4 PHY headers (20us) + (160+112+112)/6e6 + 3 SIFS + DIFS = 202us fixed.
    CHECK(ap_success_time(g, 54e6) == Approx(429.25925925925927e-6).epsilon(1e-12));
}

TEST_CASE("station ACK exchange duration, hand-computed fixture") {
    const PhyParams b = standard_params(Standard::dot11b);
    // 192 + 592 bits/1Mbps + 10 + 192 + 112 bits/1Mbps + 50 = 1148us.
    CHECK(sta_success_time(b, 1e6) == Approx(1.148e-3).epsilon(1e-12));
}

TEST_CASE("collision duration, hand-computed fixture") {
    const PhyParams b = standard_params(Standard::dot11b);
    // 192 + 592 bits/2Mbps + 364 = 852us.
    CHECK(ap_collision_time(b, 2e6) == Approx(8.52e-4).epsilon(1e-12));
    CHECK(sta_collision_time(b, 2e6) == Approx(8.52e-4).epsilon(1e-12));
}

TEST_CASE("zero-length zero-time parameters give zero durations") {
    const PhyParams z = zero_params();
    CHECK(ap_success_time(z, 1e6) == 0.0);
    CHECK(sta_success_time(z, 1e6) == 0.0);
    CHECK(ap_collision_time(z, 1e6) == 0.0);
    CHECK(sta_collision_time(z, 1e6) == 0.0);
}

TEST_CASE("durations strictly decrease in the data rate") {
    for (const Standard std_ : {Standard::dot11b, Standard::dot11g}) {
        const PhyParams p = standard_params(std_);
        for (double r : {1e6, 2e6, 5.5e6, 11e6, 24e6}) {
            CHECK(ap_success_time(p, 2 * r) < ap_success_time(p, r));
            CHECK(sta_success_time(p, 2 * r) < sta_success_time(p, r));
            CHECK(sta_collision_time(p, 2 * r) < sta_collision_time(p, r));
            CHECK(ap_collision_time(p, 2 * r) < ap_collision_time(p, r));
        }
    }
}

TEST_CASE("duration ordering at every standard rate") {
    const PhyParams b = standard_params(Standard::dot11b);
    for (double r : kRatesB) {
        CHECK(ap_success_time(b, r) > sta_success_time(b, r));
        CHECK(sta_success_time(b, r) > 0.0);
        CHECK(ap_collision_time(b, r) == sta_collision_time(b, r));
        CHECK(ap_collision_time(b, r) > 0.0);
    }
    const PhyParams g = standard_params(Standard::dot11g);
    for (double r : kRatesG) {
        CHECK(ap_success_time(g, r) > sta_success_time(g, r));
        CHECK(ap_collision_time(g, r) == sta_collision_time(g, r));
    }
}

TEST_CASE("AP collision with RTS accounting enabled") {
    PhyParams b = standard_params(Standard::dot11b);
    b.collision_uses_rts_length = true;
    // 192 + 160 bits/2Mbps + 364 = 636us, independent of the data rate.
    CHECK(ap_collision_time(b, 2e6) == Approx(636e-6).epsilon(1e-12));
    CHECK(ap_collision_time(b, 11e6) == Approx(636e-6).epsilon(1e-12));
    CHECK(ap_collision_time(b, 2e6) != sta_collision_time(b, 2e6));
    CHECK(sta_collision_time(b, 2e6) == Approx(8.52e-4).epsilon(1e-12));
}

TEST_CASE("nonpositive rates are rejected") {
    const PhyParams b = standard_params(Standard::dot11b);
    CHECK_THROWS_AS(ap_success_time(b, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sta_success_time(b, -1e6), std::invalid_argument);
    CHECK_THROWS_AS(ap_collision_time(b, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sta_collision_time(b, 0.0), std::invalid_argument);
}

TEST_CASE("parameter validation rejects broken invariants") {
    PhyParams p = standard_params(Standard::dot11b);
    p.cw_min = 1023;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);

    p = standard_params(Standard::dot11b);
    p.cw_min = 30;  // 31 is not a power of two
    CHECK_THROWS_AS(validate(p), std::invalid_argument);

    p = standard_params(Standard::dot11b);
    p.tcp_ack_bytes = 1460;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);

    p = standard_params(Standard::dot11b);
    p.difs_s = 0.0;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);

    p = standard_params(Standard::dot11b);
    p.preamble_s = -1e-6;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
}
