#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "wlantp/phy.hpp"
#include "wlantp/scenario.hpp"
#include "wlantp/states.hpp"

namespace wlantp {

// Probabilities of the events that can occupy one contention slot, given the
// per-slot attempt probability beta of each of the N+1 backlogged entities
// (N pending-ACK stations plus the AP). Classes are indexed in strictly
// descending rate order, so "higher rate" means lower index.
struct EventProbabilities {
    double idle = 0.0;
    std::vector<double> ap_success;     // AP wins, destination in class i
    std::vector<double> ap_collision;   // AP transmits into a collision, destination class i
    std::vector<double> sta_success;    // exactly one class-i station wins
    std::vector<double> sta_collision;  // station-only collision, slowest participant class i

    double success() const {
        double s = 0.0;
        for (double x : ap_success) s += x;
        for (double x : sta_success) s += x;
        return s;
    }
    double sum() const {
        double s = idle;
        for (double x : ap_success) s += x;
        for (double x : ap_collision) s += x;
        for (double x : sta_success) s += x;
        for (double x : sta_collision) s += x;
        return s;
    }
};

namespace detail {

// Core computation writing into caller-provided storage; `out_*` must each
// hold k entries and q_pow[j] must equal (1-beta)^j for j = 0 .. N+1.
// Allocation- and pow-free for the engine's per-state loop. Returns P_idle.
inline double event_probabilities_into(std::span<const int> state,
                                       std::span<const double> mix, double beta,
                                       std::span<const double> q_pow,
                                       std::span<double> out_ap_success,
                                       std::span<double> out_ap_collision,
                                       std::span<double> out_sta_success,
                                       std::span<double> out_sta_collision) {
    const std::size_t k = state.size();
    const int n_total = total_backlogged(state);
    const double q_pow_n = q_pow[static_cast<std::size_t>(n_total)];

    int suffix = n_total;     // n_{i+1} + ... + n_k once i is processed
    int prefix_before = 0;    // n_1 + ... + n_{i-1}
    for (std::size_t i = 0; i < k; ++i) {
        const int n_i = state[i];
        suffix -= n_i;
        const double p_i = mix[i];

        out_ap_success[i] = p_i * beta * q_pow_n;
        out_ap_collision[i] = p_i * beta * (1.0 - q_pow_n);
        out_sta_success[i] = n_i * beta * q_pow_n;

        // Station-only collision whose slowest participant is class i:
        // either two or more class-i stations transmit, or exactly one does
        // and at least one higher-rate station joins; nobody slower and not
        // the AP transmits.
        const double q_ni = q_pow[static_cast<std::size_t>(n_i)];
        const double q_ni_m1 = n_i > 0 ? q_pow[static_cast<std::size_t>(n_i - 1)] : 0.0;
        const double two_plus_same = 1.0 - q_ni - n_i * beta * q_ni_m1;
        const double one_plus_higher =
            n_i * beta * q_ni_m1 *
            (1.0 - q_pow[static_cast<std::size_t>(prefix_before)]);
        out_sta_collision[i] = (two_plus_same + one_plus_higher) *
                               q_pow[static_cast<std::size_t>(suffix + 1)];

        prefix_before += n_i;
    }
    return q_pow[static_cast<std::size_t>(n_total + 1)];
}

inline std::vector<double> power_table(double base, int max_exponent) {
    std::vector<double> table(static_cast<std::size_t>(max_exponent) + 1);
    table[0] = 1.0;
    for (int j = 1; j <= max_exponent; ++j)
        table[static_cast<std::size_t>(j)] = table[static_cast<std::size_t>(j - 1)] * base;
    return table;
}

} // namespace detail

inline EventProbabilities event_probabilities(std::span<const int> state,
                                              const MixProbabilities& mix,
                                              double beta) {
    if (state.size() != mix.p.size())
        throw std::invalid_argument("event_probabilities: state/mix dimension mismatch");
    if (!(beta > 0.0) || !(beta < 1.0))
        throw std::invalid_argument("event_probabilities: beta must be in (0, 1)");
    const std::size_t k = state.size();
    const auto q_pow = detail::power_table(1.0 - beta, total_backlogged(state) + 1);
    EventProbabilities ev;
    ev.ap_success.resize(k);
    ev.ap_collision.resize(k);
    ev.sta_success.resize(k);
    ev.sta_collision.resize(k);
    ev.idle = detail::event_probabilities_into(state, mix.p, beta, q_pow,
                                               ev.ap_success, ev.ap_collision,
                                               ev.sta_success, ev.sta_collision);
    return ev;
}

// Channel occupancy of each event type, per rate class, for one scenario.
struct ClassDurations {
    std::vector<double> ap_success_s;
    std::vector<double> sta_success_s;
    std::vector<double> ap_collision_s;
    std::vector<double> sta_collision_s;
    double slot_s = 0.0;

    static ClassDurations from(const PhyParams& params,
                               std::span<const RateClass> classes) {
        ClassDurations d;
        d.slot_s = params.slot_s;
        d.ap_success_s.reserve(classes.size());
        for (const auto& c : classes) {
            d.ap_success_s.push_back(ap_success_time(params, c.rate_bps));
            d.sta_success_s.push_back(sta_success_time(params, c.rate_bps));
            d.ap_collision_s.push_back(ap_collision_time(params, c.rate_bps));
            d.sta_collision_s.push_back(sta_collision_time(params, c.rate_bps));
        }
        return d;
    }
};

// Mean time from entering a state until the next successful transmission:
// idle slots and collisions recurse, successes terminate the cycle. Solving
// that one-step recursion gives
//   E X = (P_idle delta + sum P_event T_event) / (1 - P_idle - P_collisions).
inline double mean_sojourn(const EventProbabilities& ev, const ClassDurations& dur) {
    const std::size_t k = ev.ap_success.size();
    if (dur.ap_success_s.size() != k)
        throw std::invalid_argument("mean_sojourn: durations/probabilities mismatch");
    double occupied = ev.idle * dur.slot_s;
    double recurring = ev.idle;
    for (std::size_t i = 0; i < k; ++i) {
        occupied += ev.ap_success[i] * dur.ap_success_s[i] +
                    ev.ap_collision[i] * dur.ap_collision_s[i] +
                    ev.sta_success[i] * dur.sta_success_s[i] +
                    ev.sta_collision[i] * dur.sta_collision_s[i];
        recurring += ev.ap_collision[i] + ev.sta_collision[i];
    }
    const double denom = 1.0 - recurring;
    if (!(denom > 0.0))
        throw std::domain_error("mean_sojourn: no success event has positive probability");
    return occupied / denom;
}

} // namespace wlantp
