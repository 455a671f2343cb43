#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wlantp/backoff.hpp"
#include "wlantp/numeric.hpp"
#include "wlantp/phy.hpp"
#include "wlantp/scenario.hpp"
#include "wlantp/sojourn.hpp"
#include "wlantp/states.hpp"

namespace wlantp {

struct AnalysisOptions {
    std::optional<int> n_max;                       // overrides scenario + default
    bool collision_uses_rts_length = false;
    int retry_limit = 7;
    AckChainModel ack_chain = AckChainModel::ack_per_d_packets;
    std::optional<std::vector<double>> mix_override; // per-class p_i, must sum to 1
    std::uint64_t state_budget = kDefaultStateBudget;
};

struct ThroughputReport {
    std::string label;
    Standard standard = Standard::dot11b;
    int delayed_ack = 1;
    std::vector<RateClass> classes;      // effective classes (zero counts dropped)

    double packets_per_s = 0.0;          // successful AP data transmissions per second
    double aggregate_mbps = 0.0;         // packets_per_s * TCP payload bits / 1e6
    double per_sta_mbps = 0.0;           // aggregate / M
    std::vector<double> per_class_mbps;  // per station of each class; equals
                                         // per_sta_mbps when p_i = m_i / M

    double reward_mean = 0.0;            // stationary P(success epoch is the AP's)
    double mean_cycle_s = 0.0;           // stationary mean time between successes
    double mean_backlogged_stas = 0.0;   // time-averaged pending-ACK station count

    double ack_load = 0.0;               // chain intensity used
    int n_max = 0;
    double captured_mass = 0.0;
};

// Renewal-reward aggregate throughput: reward 1 per AP success, so
//
//   packets/s = sum_n pi(n) / (N+1)  /  sum_n pi(n) E_n[X]
//
// evaluated over the truncated state space, shell by shell in ascending N
// with compensated accumulation so truncation error is tail-only.
inline ThroughputReport aggregate_throughput(const ScenarioConfig& scenario,
                                             const AnalysisOptions& options = {}) {
    ScenarioConfig cfg = scenario;
    // Zero-count classes contribute nothing but would inflate the state space.
    std::erase_if(cfg.classes, [](const RateClass& c) { return c.count == 0; });
    validate(cfg);

    const int k = static_cast<int>(cfg.classes.size());
    const int m_total = cfg.station_count();

    std::vector<int> counts;
    counts.reserve(cfg.classes.size());
    for (const auto& c : cfg.classes) counts.push_back(c.count);
    MixProbabilities mix = options.mix_override
                               ? MixProbabilities{*options.mix_override}
                               : MixProbabilities::from_counts(counts);
    mix.validate();
    if (static_cast<int>(mix.p.size()) != k)
        throw std::invalid_argument("aggregate_throughput: mix override size mismatch");

    PhyParams params = standard_params(cfg.standard);
    params.collision_uses_rts_length = options.collision_uses_rts_length;
    const ClassDurations durations = ClassDurations::from(params, cfg.classes);

    const double load = ack_chain_load(options.ack_chain, cfg.delayed_ack);
    const int n_max = options.n_max ? *options.n_max
                                    : cfg.n_max ? *cfg.n_max : default_n_max(load);
    if (n_max < 0)
        throw std::invalid_argument("aggregate_throughput: n_max must be >= 0");
    check_state_budget(k, n_max, options.state_budget);

    const AttemptProbTable beta_table(n_max + 1, BackoffParams::from(params, options.retry_limit));

    KahanSum reward_sum;      // sum of w(n)                  [pi(n)/(N+1) up to 1/Z]
    KahanSum cycle_sum;       // sum of (N+1) w(n) E_n[X]     [pi(n) E_n[X] up to 1/Z]
    KahanSum mass_sum;        // sum of (N+1) w(n)            [truncated normalization]
    KahanSum backlog_time_sum;  // sum of (N+1) w(n) N E_n[X]

    EventProbabilities ev;
    ev.ap_success.resize(k);
    ev.ap_collision.resize(k);
    ev.sta_success.resize(k);
    ev.sta_collision.resize(k);

    StateVector state(static_cast<std::size_t>(k), 0);

    for (int shell = 0; shell <= n_max; ++shell) {
        const double beta = beta_table(shell + 1);
        const auto q_pow = detail::power_table(1.0 - beta, shell + 1);

        // Walk all states with sum == shell, carrying the product-form weight
        // w = prod (load p_i)^{n_i} / n_i! incrementally per coordinate.
        auto visit = [&](double weight) {
            ev.idle = detail::event_probabilities_into(state, mix.p, beta, q_pow,
                                                       ev.ap_success, ev.ap_collision,
                                                       ev.sta_success, ev.sta_collision);
            const double sojourn = mean_sojourn(ev, durations);
            const double biased = (shell + 1) * weight;
            reward_sum.add(weight);
            cycle_sum.add(biased * sojourn);
            mass_sum.add(biased);
            backlog_time_sum.add(biased * shell * sojourn);
        };
        auto recurse = [&](auto&& self, int index, int remaining, double weight) -> void {
            if (index == k - 1) {
                double w = weight;
                const double lambda = load * mix.p[static_cast<std::size_t>(index)];
                for (int n = 1; n <= remaining; ++n) w *= lambda / n;
                state[static_cast<std::size_t>(index)] = remaining;
                visit(w);
                state[static_cast<std::size_t>(index)] = 0;
                return;
            }
            double w = weight;
            const double lambda = load * mix.p[static_cast<std::size_t>(index)];
            for (int n = 0; n <= remaining; ++n) {
                if (n > 0) w *= lambda / n;
                state[static_cast<std::size_t>(index)] = n;
                self(self, index + 1, remaining - n, w);
            }
            state[static_cast<std::size_t>(index)] = 0;
        };
        recurse(recurse, 0, shell, 1.0);
    }

    ThroughputReport report;
    report.label = cfg.label;
    report.standard = cfg.standard;
    report.delayed_ack = cfg.delayed_ack;
    report.classes = cfg.classes;
    report.ack_load = load;
    report.n_max = n_max;
    report.captured_mass =
        std::min(1.0, mass_sum.value() / exact_normalization_constant(load));

    report.packets_per_s = reward_sum.value() / cycle_sum.value();
    report.aggregate_mbps =
        report.packets_per_s * 8.0 * params.tcp_payload_bytes / 1e6;
    report.per_sta_mbps = report.aggregate_mbps / m_total;
    report.per_class_mbps.reserve(cfg.classes.size());
    for (std::size_t i = 0; i < cfg.classes.size(); ++i)
        report.per_class_mbps.push_back(report.aggregate_mbps * mix.p[i] /
                                        cfg.classes[i].count);
    report.reward_mean = reward_sum.value() / mass_sum.value();
    report.mean_cycle_s = cycle_sum.value() / mass_sum.value();
    report.mean_backlogged_stas = backlog_time_sum.value() / cycle_sum.value();
    return report;
}

inline std::vector<ThroughputReport> sweep_delayed_ack(const ScenarioConfig& base,
                                                       std::span<const int> values,
                                                       const AnalysisOptions& options = {}) {
    std::vector<ThroughputReport> reports;
    reports.reserve(values.size());
    for (int d : values) {
        ScenarioConfig cfg = base;
        cfg.delayed_ack = d;
        cfg.label = base.label + " [d=" + std::to_string(d) + "]";
        reports.push_back(aggregate_throughput(cfg, options));
    }
    return reports;
}

inline std::vector<ThroughputReport> sweep_truncation(const ScenarioConfig& base,
                                                      std::span<const int> values,
                                                      const AnalysisOptions& options = {}) {
    std::vector<ThroughputReport> reports;
    reports.reserve(values.size());
    for (int n_max : values) {
        AnalysisOptions opt = options;
        opt.n_max = n_max;
        ScenarioConfig cfg = base;
        cfg.label = base.label + " [n_max=" + std::to_string(n_max) + "]";
        reports.push_back(aggregate_throughput(cfg, opt));
    }
    return reports;
}

inline std::vector<ThroughputReport> sweep_counts(const ScenarioConfig& base,
                                                  std::span<const std::vector<int>> count_sets,
                                                  const AnalysisOptions& options = {}) {
    std::vector<ThroughputReport> reports;
    reports.reserve(count_sets.size());
    for (const auto& counts : count_sets) {
        if (counts.size() != base.classes.size())
            throw std::invalid_argument("sweep_counts: count vector size mismatch");
        ScenarioConfig cfg = base;
        std::string tag;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            cfg.classes[i].count = counts[i];
            tag += (i ? ":" : "") + std::to_string(counts[i]);
        }
        cfg.label = base.label + " [counts=" + tag + "]";
        reports.push_back(aggregate_throughput(cfg, options));
    }
    return reports;
}

} // namespace wlantp
