#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wlantp/numeric.hpp"

namespace wlantp {

// Counts of pending-ACK stations per rate class.
using StateVector = std::vector<int>;

inline int total_backlogged(std::span<const int> state) {
    return std::accumulate(state.begin(), state.end(), 0);
}

// How the delayed-ACK factor d maps onto the pending-ACK chain.
//
// ack_per_d_packets: a station joins the pending set once per d delivered
// packets and leaves whenever it wins the channel (chain intensity 1/d).
// This is what the receiver actually does and what the simulator implements.
//
// ack_per_packet: every delivered packet puts its receiver into the pending
// set and a winning station leaves it with probability 1/d (intensity d).
// An alternative embedding of the same balance equations, kept selectable
// for comparison runs.
enum class AckChainModel { ack_per_d_packets, ack_per_packet };

inline double ack_chain_load(AckChainModel model, int d) {
    return model == AckChainModel::ack_per_d_packets ? 1.0 / d : static_cast<double>(d);
}

// Conditional probability that an AP transmission is addressed to each class.
struct MixProbabilities {
    std::vector<double> p;

    static MixProbabilities from_counts(std::span<const int> counts) {
        double total = 0.0;
        for (int c : counts) total += c;
        if (!(total > 0.0))
            throw std::invalid_argument("MixProbabilities: no stations");
        MixProbabilities mix;
        mix.p.reserve(counts.size());
        for (int c : counts) mix.p.push_back(c / total);
        return mix;
    }

    void validate() const {
        double sum = 0.0;
        for (double x : p) {
            if (x < 0.0) throw std::invalid_argument("MixProbabilities: negative entry");
            sum += x;
        }
        if (std::fabs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("MixProbabilities: entries must sum to 1");
    }
};

inline std::uint64_t state_count(int k, int n_max) {
    return binomial(n_max + k, k);
}

constexpr std::uint64_t kDefaultStateBudget = 50'000'000;

inline void check_state_budget(int k, int n_max, std::uint64_t budget = kDefaultStateBudget) {
    const std::uint64_t count = state_count(k, n_max);
    if (count > budget)
        throw std::length_error("state space has " + std::to_string(count) +
                                " states, over the budget of " + std::to_string(budget) +
                                "; reduce N_max or the number of rate classes");
}

// Visits every nonnegative k-vector with component sum exactly `total`,
// in lexicographic order of (n_1, ..., n_k).
template <typename Visitor>
void for_each_state_with_sum(int k, int total, Visitor&& visit) {
    StateVector state(static_cast<std::size_t>(k), 0);
    auto recurse = [&](auto&& self, int index, int remaining) -> void {
        if (index == k - 1) {
            state[static_cast<std::size_t>(index)] = remaining;
            visit(std::span<const int>(state));
            return;
        }
        for (int n = remaining; n >= 0; --n) {
            state[static_cast<std::size_t>(index)] = n;
            self(self, index + 1, remaining - n);
        }
        state[static_cast<std::size_t>(index)] = 0;
    };
    if (k >= 1) recurse(recurse, 0, total);
}

// Visits every state with component sum <= n_max, shell by shell (sum
// ascending). The shell ordering keeps truncation error tail-only when the
// visitor accumulates.
template <typename Visitor>
void for_each_state(int k, int n_max, Visitor&& visit) {
    for (int total = 0; total <= n_max; ++total)
        for_each_state_with_sum(k, total, visit);
}

inline std::vector<StateVector> enumerate_states(int k, int n_max,
                                                 std::uint64_t budget = kDefaultStateBudget) {
    if (k < 1) throw std::invalid_argument("enumerate_states: need k >= 1");
    if (n_max < 0) throw std::invalid_argument("enumerate_states: need n_max >= 0");
    check_state_budget(k, n_max, budget);
    std::vector<StateVector> states;
    states.reserve(state_count(k, n_max));
    for_each_state(k, n_max, [&](std::span<const int> s) {
        states.emplace_back(s.begin(), s.end());
    });
    return states;
}

// Unnormalized product-form stationary weight
//   (N+1) * prod_i (ack_load * p_i)^(n_i) / n_i!
// of the embedded pending-ACK chain. ack_load is the mean number of pending
// ACKs the chain sustains per AP transmission cycle; the detailed balance
// relation pi(n) p_i / (N+1) = (1/ack_load) pi(n+e_i) (n_i+1) / (N+2) holds
// for every state and class.
inline double pi_unnormalized(std::span<const int> state, const MixProbabilities& mix,
                              double ack_load) {
    if (state.size() != mix.p.size())
        throw std::invalid_argument("pi_unnormalized: state/mix dimension mismatch");
    if (!(ack_load > 0.0))
        throw std::invalid_argument("pi_unnormalized: ack_load must be positive");
    double product = 1.0;
    int total = 0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        const int n = state[i];
        if (n < 0) throw std::invalid_argument("pi_unnormalized: negative state entry");
        total += n;
        const double lambda = ack_load * mix.p[i];
        for (int j = 1; j <= n; ++j) product *= lambda / j;
    }
    return (total + 1) * product;
}

// Sum of pi_unnormalized over all states with N <= n_max. Independent of the
// mix: the per-shell sum collapses to (N+1) ack_load^N / N!.
inline double normalization_constant(double ack_load, int n_max) {
    if (n_max < 0) throw std::invalid_argument("normalization_constant: need n_max >= 0");
    if (n_max > 170)
        throw std::invalid_argument("normalization_constant: n_max > 170 overflows double factorials");
    KahanSum sum;
    double term = 1.0;  // ack_load^N / N!
    for (int n = 0; n <= n_max; ++n) {
        sum.add((n + 1) * term);
        term *= ack_load / (n + 1);
    }
    return sum.value();
}

// Limit of normalization_constant as n_max grows: (1 + ack_load) e^ack_load.
inline double exact_normalization_constant(double ack_load) {
    return (1.0 + ack_load) * std::exp(ack_load);
}

inline int default_n_max(double ack_load) {
    return std::max(30, static_cast<int>(std::ceil(5.0 * ack_load + 20.0)));
}

struct StationaryDistribution {
    int k = 0;
    int n_max = 0;
    double captured_mass = 0.0;  // truncated mass / exact infinite-sum mass
    std::vector<std::pair<StateVector, double>> support;
};

// Materialized truncated stationary distribution, renormalized over the
// truncated support. Intended for verification at small sizes; the
// throughput engine streams states instead of materializing them.
inline StationaryDistribution stationary_distribution(const MixProbabilities& mix,
                                                      double ack_load, int n_max,
                                                      std::uint64_t budget = kDefaultStateBudget) {
    const int k = static_cast<int>(mix.p.size());
    if (k < 1) throw std::invalid_argument("stationary_distribution: need k >= 1");
    check_state_budget(k, n_max, budget);

    StationaryDistribution dist;
    dist.k = k;
    dist.n_max = n_max;
    dist.support.reserve(state_count(k, n_max));

    KahanSum total;
    for_each_state(k, n_max, [&](std::span<const int> s) {
        const double w = pi_unnormalized(s, mix, ack_load);
        total.add(w);
        dist.support.emplace_back(StateVector(s.begin(), s.end()), w);
    });
    for (auto& [state, prob] : dist.support) prob /= total.value();
    dist.captured_mass =
        std::min(1.0, total.value() / exact_normalization_constant(ack_load));
    return dist;
}

} // namespace wlantp
