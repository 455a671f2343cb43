#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "wlantp/backoff.hpp"
#include "wlantp/phy.hpp"
#include "wlantp/scenario.hpp"
#include "wlantp/sojourn.hpp"

namespace wlantp {

struct SimConfig {
    ScenarioConfig scenario;
    double duration_s = 60.0;
    double warmup_s = 5.0;
    std::uint64_t seed = 0;         // mandatory: same seed, same result
    int tcp_window = 40;            // packets in flight per connection
    int retry_limit = 7;            // CW growth cap; frames are never dropped
    int batches = 10;               // batch-means intervals for the CI
    bool collision_uses_rts_length = false;
    std::ostream* trace = nullptr;  // optional event trace sink

    void validate() const {
        if (!(duration_s > warmup_s) || warmup_s < 0.0)
            throw std::invalid_argument("SimConfig: need duration > warmup >= 0");
        if (tcp_window < 1) throw std::invalid_argument("SimConfig: need tcp_window >= 1");
        if (batches < 2) throw std::invalid_argument("SimConfig: need batches >= 2");
        if (retry_limit < 0) throw std::invalid_argument("SimConfig: need retry_limit >= 0");
    }
};

struct SimResult {
    double aggregate_mbps = 0.0;
    std::vector<double> per_sta_mbps;    // class-major station order
    double collision_fraction = 0.0;     // collisions / all channel events, post-warmup
    double mean_nonempty_stas = 0.0;     // time-averaged pending-ACK stations, post-warmup
    double mean_pending_acks = 0.0;      // time-averaged queued TCP-ACK frames, post-warmup
    double mean_acks_at_success = 0.0;   // queued TCP-ACKs sampled at success epochs
    double ci_halfwidth_mbps = 0.0;      // 95% batch-means confidence halfwidth
    double measured_time_s = 0.0;

    // Whole-run accounting, for conservation and time-balance checks.
    std::uint64_t idle_slots = 0;
    std::uint64_t ap_successes = 0;
    std::uint64_t sta_successes = 0;
    std::uint64_t collisions = 0;
    std::uint64_t data_packets_delivered = 0;  // whole run
    std::uint64_t acks_generated = 0;          // whole run
    std::uint64_t residual_rx_packets = 0;     // sum of per-station rx counters at end
    std::uint64_t pending_acks_at_end = 0;
    std::int64_t total_time_ps = 0;
    std::int64_t busy_time_ps = 0;

    friend bool operator==(const SimResult&, const SimResult&) = default;
};

namespace detail {

inline std::int64_t to_ps(double seconds) {
    return static_cast<std::int64_t>(std::llround(seconds * 1e12));
}

struct StationState {
    int rate_class = 0;
    int rx_count = 0;        // data packets received since the last TCP-ACK
    int pending_acks = 0;    // TCP-ACK frames queued at the MAC
    int backoff = 0;
    int stage = 0;
};

} // namespace detail

// Slot-level DCF simulation of the scenario: one AP saturated with TCP data
// for M stations, each station returning one cumulative TCP-ACK per d
// received packets, fixed per-connection window, zero wired-side delay.
//
// The MAC follows the slotted abstraction of the analysis: all backlogged
// nodes hold backoff counters; a node transmits in the slot its counter
// reaches zero; simultaneous transmissions collide and double the
// contention window; every channel event (idle slot, success, collision)
// advances every other backlogged node's countdown by one slot. Successes
// and collisions occupy the channel for the phy-level durations, which
// already include the closing DIFS/EIFS deferral.
inline SimResult run_simulation(const SimConfig& config) {
    config.validate();
    ScenarioConfig cfg = config.scenario;
    validate(cfg);

    PhyParams params = standard_params(cfg.standard);
    params.collision_uses_rts_length = config.collision_uses_rts_length;
    const int k = static_cast<int>(cfg.classes.size());
    const int d = cfg.delayed_ack;
    const int m_total = cfg.station_count();
    const BackoffParams bp = BackoffParams::from(params, config.retry_limit);

    // Event durations in integer picoseconds; all time accounting is exact.
    const std::int64_t slot_ps = detail::to_ps(params.slot_s);
    std::vector<std::int64_t> ap_success_ps(k), sta_success_ps(k);
    std::vector<std::int64_t> ap_collision_ps(k), sta_collision_ps(k);
    for (int i = 0; i < k; ++i) {
        ap_success_ps[i] = detail::to_ps(ap_success_time(params, cfg.classes[i].rate_bps));
        sta_success_ps[i] = detail::to_ps(sta_success_time(params, cfg.classes[i].rate_bps));
        ap_collision_ps[i] = detail::to_ps(ap_collision_time(params, cfg.classes[i].rate_bps));
        sta_collision_ps[i] = detail::to_ps(sta_collision_time(params, cfg.classes[i].rate_bps));
    }
    const std::int64_t duration_ps = detail::to_ps(config.duration_s);
    const std::int64_t warmup_ps = detail::to_ps(config.warmup_s);
    const std::int64_t window_ps = duration_ps - warmup_ps;

    std::mt19937_64 rng(config.seed);
    auto draw_backoff = [&](int stage) {
        std::uniform_int_distribution<int> dist(0, bp.cw_at_stage(stage));
        return dist(rng);
    };

    // Stations in class-major order.
    std::vector<detail::StationState> stations;
    stations.reserve(static_cast<std::size_t>(m_total));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < cfg.classes[i].count; ++j)
            stations.push_back(detail::StationState{i, 0, 0, 0, 0});

    // The server opens every window at once: W packets per connection,
    // interleaved round-robin into the AP FIFO.
    std::deque<int> ap_fifo;
    for (int w = 0; w < config.tcp_window; ++w)
        for (int s = 0; s < m_total; ++s) ap_fifo.push_back(s);
    int ap_backoff = draw_backoff(0);
    int ap_stage = 0;

    SimResult result;
    result.per_sta_mbps.assign(static_cast<std::size_t>(m_total), 0.0);

    std::vector<std::uint64_t> sta_bits(static_cast<std::size_t>(m_total), 0);
    std::vector<std::uint64_t> batch_bits(static_cast<std::size_t>(config.batches), 0);
    const double payload_bits = 8.0 * params.tcp_payload_bytes;

    std::int64_t now_ps = 0;
    std::int64_t backlog_weighted_ps = 0;  // integral of pending-station count
    std::int64_t acks_weighted_ps = 0;     // integral of queued-ACK count
    int nonempty_stas = 0;
    int total_pending_acks = 0;
    std::uint64_t events_in_window = 0, collisions_in_window = 0;
    std::uint64_t successes_in_window = 0;
    std::uint64_t acks_at_success_sum = 0;

    std::vector<int> attempters;
    attempters.reserve(static_cast<std::size_t>(m_total) + 1);

    auto trace_line = [&](const char* event, const std::string& node,
                          std::int64_t dur_ps, const std::string& detail_str) {
        if (!config.trace) return;
        (*config.trace) << now_ps / 1e6 << ' ' << event << ' ' << node << ' '
                        << dur_ps / 1e6 << (detail_str.empty() ? "" : " ")
                        << detail_str << '\n';
    };

    while (now_ps < duration_ps) {
        if (ap_fifo.empty())
            throw std::runtime_error(
                "run_simulation: AP queue empty at t=" + std::to_string(now_ps / 1e12) +
                " s; the TCP window is too small to keep the AP saturated");

        attempters.clear();
        const bool ap_attempts = ap_backoff == 0;
        const int backlog_at_step_start = nonempty_stas;
        const int acks_at_step_start = total_pending_acks;
        for (int s = 0; s < m_total; ++s)
            if (stations[static_cast<std::size_t>(s)].pending_acks > 0 &&
                stations[static_cast<std::size_t>(s)].backoff == 0)
                attempters.push_back(s);

        std::int64_t step_ps;
        const int n_tx = static_cast<int>(attempters.size()) + (ap_attempts ? 1 : 0);
        int newly_pending = -1;  // station backlogged by this step's delivery

        if (n_tx == 0) {
            step_ps = slot_ps;
            ++result.idle_slots;
        } else if (n_tx == 1 && ap_attempts) {
            const int dest = ap_fifo.front();
            ap_fifo.pop_front();
            auto& sta = stations[static_cast<std::size_t>(dest)];
            step_ps = ap_success_ps[static_cast<std::size_t>(sta.rate_class)];
            ++result.ap_successes;
            ++result.data_packets_delivered;

            const std::int64_t done_ps = now_ps + step_ps;
            if (done_ps > warmup_ps && done_ps <= duration_ps) {
                sta_bits[static_cast<std::size_t>(dest)] +=
                    static_cast<std::uint64_t>(payload_bits);
                const std::int64_t offset = done_ps - warmup_ps - 1;
                batch_bits[static_cast<std::size_t>(
                    std::min<std::int64_t>(offset * config.batches / window_ps,
                                           config.batches - 1))] +=
                    static_cast<std::uint64_t>(payload_bits);
                ++events_in_window;
            }

            if (++sta.rx_count == d) {
                sta.rx_count = 0;
                ++result.acks_generated;
                ++total_pending_acks;
                if (++sta.pending_acks == 1) {
                    sta.stage = 0;
                    sta.backoff = draw_backoff(0);
                    ++nonempty_stas;
                    newly_pending = dest;  // enqueued at the period's end;
                                           // countdown starts next slot
                }
            }
            ap_stage = 0;
            ap_backoff = draw_backoff(0);
            if (done_ps > warmup_ps && done_ps <= duration_ps) {
                ++successes_in_window;
                acks_at_success_sum += static_cast<std::uint64_t>(total_pending_acks);
            }
            trace_line("ap_success", "ap", step_ps, "dest=sta" + std::to_string(dest));
        } else if (n_tx == 1) {
            const int s = attempters.front();
            auto& sta = stations[static_cast<std::size_t>(s)];
            step_ps = sta_success_ps[static_cast<std::size_t>(sta.rate_class)];
            ++result.sta_successes;
            --sta.pending_acks;
            --total_pending_acks;
            if (sta.pending_acks == 0) --nonempty_stas;
            // The TCP-ACK reaches the server instantly; d more packets enter
            // the AP queue for this connection.
            for (int j = 0; j < d; ++j) ap_fifo.push_back(s);
            sta.stage = 0;
            if (sta.pending_acks > 0) sta.backoff = draw_backoff(0);
            const std::int64_t done_ps = now_ps + step_ps;
            if (done_ps > warmup_ps && done_ps <= duration_ps) {
                ++events_in_window;
                ++successes_in_window;
                acks_at_success_sum += static_cast<std::uint64_t>(total_pending_acks);
            }
            trace_line("sta_success", "sta" + std::to_string(s), step_ps, "");
        } else {
            // Collision: charged for the slowest frame involved.
            step_ps = 0;
            if (ap_attempts) {
                const int dest_class =
                    stations[static_cast<std::size_t>(ap_fifo.front())].rate_class;
                step_ps = ap_collision_ps[static_cast<std::size_t>(dest_class)];
                ap_stage = std::min(ap_stage + 1, bp.retry_limit);
                ap_backoff = draw_backoff(ap_stage);
            }
            for (int s : attempters) {
                auto& sta = stations[static_cast<std::size_t>(s)];
                step_ps = std::max(
                    step_ps, sta_collision_ps[static_cast<std::size_t>(sta.rate_class)]);
                sta.stage = std::min(sta.stage + 1, bp.retry_limit);
                sta.backoff = draw_backoff(sta.stage);
            }
            ++result.collisions;
            const std::int64_t done_ps = now_ps + step_ps;
            if (done_ps > warmup_ps && done_ps <= duration_ps) {
                ++events_in_window;
                ++collisions_in_window;
            }
            trace_line("collision", ap_attempts ? "ap+" : "sta-only", step_ps,
                       "n=" + std::to_string(n_tx));
        }

        // Every non-transmitting backlogged node advances its countdown by
        // one slot per channel event, idle or busy.
        if (!ap_attempts && ap_backoff > 0) --ap_backoff;
        for (int s = 0; s < m_total; ++s) {
            auto& sta = stations[static_cast<std::size_t>(s)];
            if (sta.pending_acks > 0 && sta.backoff > 0 && s != newly_pending &&
                (attempters.empty() ||
                 std::find(attempters.begin(), attempters.end(), s) == attempters.end()))
                --sta.backoff;
        }

        // Time-weighted pending-station count over the measurement window.
        // Queue changes take effect at the end of a busy period, so the
        // interval is weighted with the count the step started with.
        const std::int64_t t0 = std::max(now_ps, warmup_ps);
        const std::int64_t t1 = std::min(now_ps + step_ps, duration_ps);
        if (t1 > t0) {
            backlog_weighted_ps += static_cast<std::int64_t>(backlog_at_step_start) * (t1 - t0);
            acks_weighted_ps += static_cast<std::int64_t>(acks_at_step_start) * (t1 - t0);
        }

        if (n_tx > 0) result.busy_time_ps += step_ps;
        now_ps += step_ps;
    }

    result.total_time_ps = now_ps;
    result.measured_time_s = window_ps / 1e12;

    std::uint64_t total_bits = 0;
    for (int s = 0; s < m_total; ++s) {
        total_bits += sta_bits[static_cast<std::size_t>(s)];
        result.per_sta_mbps[static_cast<std::size_t>(s)] =
            sta_bits[static_cast<std::size_t>(s)] / (result.measured_time_s * 1e6);
    }
    result.aggregate_mbps = total_bits / (result.measured_time_s * 1e6);
    result.mean_nonempty_stas = static_cast<double>(backlog_weighted_ps) / window_ps;
    result.mean_pending_acks = static_cast<double>(acks_weighted_ps) / window_ps;
    result.mean_acks_at_success =
        successes_in_window > 0
            ? static_cast<double>(acks_at_success_sum) / successes_in_window
            : 0.0;
    result.collision_fraction =
        events_in_window > 0
            ? static_cast<double>(collisions_in_window) / events_in_window
            : 0.0;

    // Batch-means 95% confidence halfwidth (Student-t, batches-1 dof; the
    // quantile below is for the default 10 batches).
    {
        const int b = config.batches;
        const double batch_len_s = result.measured_time_s / b;
        double mean = 0.0;
        std::vector<double> rates(static_cast<std::size_t>(b));
        for (int i = 0; i < b; ++i) {
            rates[static_cast<std::size_t>(i)] =
                batch_bits[static_cast<std::size_t>(i)] / (batch_len_s * 1e6);
            mean += rates[static_cast<std::size_t>(i)];
        }
        mean /= b;
        double var = 0.0;
        for (double r : rates) var += (r - mean) * (r - mean);
        var /= (b - 1);
        const double t_quantile = b == 10 ? 2.2621571628 : 2.0;
        result.ci_halfwidth_mbps = t_quantile * std::sqrt(var / b);
    }

    for (const auto& sta : stations) {
        result.residual_rx_packets += static_cast<std::uint64_t>(sta.rx_count);
        result.pending_acks_at_end += static_cast<std::uint64_t>(sta.pending_acks);
    }
    return result;
}

// Attempt rate of saturated nodes under the same slotted MAC, with frames
// that occupy exactly one slot. Returns attempts per node per slot; with a
// single node this is 2/(cw_min+2), and it tracks the fixed point of
// solve_attempt_probability as the node count grows.
inline double measure_attempt_rate(int n_saturated, const SimConfig& config) {
    if (n_saturated < 1)
        throw std::invalid_argument("measure_attempt_rate: need n_saturated >= 1");
    const PhyParams params = standard_params(config.scenario.standard);
    const BackoffParams bp = BackoffParams::from(params, config.retry_limit);
    const std::uint64_t steps = std::max<std::uint64_t>(
        200'000, static_cast<std::uint64_t>(config.duration_s / params.slot_s));

    std::mt19937_64 rng(config.seed);
    auto draw_backoff = [&](int stage) {
        std::uniform_int_distribution<int> dist(0, bp.cw_at_stage(stage));
        return dist(rng);
    };

    std::vector<int> backoff(static_cast<std::size_t>(n_saturated));
    std::vector<int> stage(static_cast<std::size_t>(n_saturated), 0);
    for (auto& b : backoff) b = draw_backoff(0);

    std::uint64_t attempts = 0;
    std::vector<int> tx;
    tx.reserve(static_cast<std::size_t>(n_saturated));
    for (std::uint64_t step = 0; step < steps; ++step) {
        tx.clear();
        for (int i = 0; i < n_saturated; ++i)
            if (backoff[static_cast<std::size_t>(i)] == 0) tx.push_back(i);
        attempts += tx.size();
        if (tx.size() == 1) {
            stage[static_cast<std::size_t>(tx[0])] = 0;
            backoff[static_cast<std::size_t>(tx[0])] = draw_backoff(0);
        } else {
            for (int i : tx) {
                stage[static_cast<std::size_t>(i)] =
                    std::min(stage[static_cast<std::size_t>(i)] + 1, bp.retry_limit);
                backoff[static_cast<std::size_t>(i)] =
                    draw_backoff(stage[static_cast<std::size_t>(i)]);
            }
        }
        for (int i = 0; i < n_saturated; ++i)
            if (backoff[static_cast<std::size_t>(i)] > 0 &&
                std::find(tx.begin(), tx.end(), i) == tx.end())
                --backoff[static_cast<std::size_t>(i)];
    }
    return static_cast<double>(attempts) /
           (static_cast<double>(n_saturated) * static_cast<double>(steps));
}

} // namespace wlantp
