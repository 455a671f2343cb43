#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "wlantp/states.hpp"

namespace wlantp {

// Explicit transition matrix of the embedded pending-ACK chain over the
// truncated support, used to verify the closed-form stationary distribution
// independently. With the ack_per_packet embedding, from state n with
// N = sum n_i:
//   n -> n + e_i   with probability p_i / (N+1)          (AP wins)
//   n -> n - e_i   with probability n_i / ((N+1) d)      (station wins, dequeues)
//   n -> n         with probability sum_i n_i (1 - 1/d) / (N+1)
// With ack_per_d_packets the 1/d factor moves to the birth side and the AP
// win without an ACK becomes the self-loop. Either way the chain is
// reversible with the matching product-form stationary weights. At the
// truncation boundary the birth mass folds into the self-loop, which keeps
// the matrix stochastic and leaves the stationary vector equal to the
// truncated-and-renormalized closed form.
struct TransitionModel {
    int k = 0;
    int n_max = 0;
    int d = 1;
    AckChainModel model = AckChainModel::ack_per_packet;
    std::vector<StateVector> states;                       // index -> state
    std::vector<std::vector<std::pair<int, double>>> rows; // sparse row entries

    int index_of(const StateVector& state) const {
        const auto it = index_.find(encode(state));
        if (it == index_.end())
            throw std::out_of_range("TransitionModel: state outside the truncated support");
        return it->second;
    }

    std::uint64_t encode(const StateVector& state) const {
        std::uint64_t key = 0;
        for (int n : state) key = key * (static_cast<std::uint64_t>(n_max) + 2) +
                                  static_cast<std::uint64_t>(n + 1);
        return key;
    }

    std::unordered_map<std::uint64_t, int> index_;
};

inline TransitionModel build_transitions(const MixProbabilities& mix, int d, int n_max,
                                         AckChainModel model = AckChainModel::ack_per_packet,
                                         std::uint64_t budget = kDefaultStateBudget) {
    if (d < 1) throw std::invalid_argument("build_transitions: need d >= 1");
    mix.validate();
    const int k = static_cast<int>(mix.p.size());

    TransitionModel tm;
    tm.k = k;
    tm.n_max = n_max;
    tm.d = d;
    tm.model = model;
    tm.states = enumerate_states(k, n_max, budget);
    tm.index_.reserve(tm.states.size() * 2);
    for (std::size_t i = 0; i < tm.states.size(); ++i)
        tm.index_.emplace(tm.encode(tm.states[i]), static_cast<int>(i));

    tm.rows.resize(tm.states.size());
    const bool per_packet = model == AckChainModel::ack_per_packet;
    const double birth_factor = per_packet ? 1.0 : 1.0 / d;
    const double dequeue_prob = per_packet ? 1.0 / d : 1.0;
    for (std::size_t si = 0; si < tm.states.size(); ++si) {
        const StateVector& n = tm.states[si];
        const int total = total_backlogged(n);
        auto& row = tm.rows[si];
        row.reserve(2 * static_cast<std::size_t>(k) + 1);

        // An AP win that generates no pending ACK stays in place.
        double self_loop = (1.0 - birth_factor) / (total + 1);
        StateVector neighbor = n;
        for (int i = 0; i < k; ++i) {
            const double birth =
                birth_factor * mix.p[static_cast<std::size_t>(i)] / (total + 1);
            if (total < n_max) {
                neighbor[static_cast<std::size_t>(i)] += 1;
                row.emplace_back(tm.index_of(neighbor), birth);
                neighbor[static_cast<std::size_t>(i)] -= 1;
            } else {
                self_loop += birth;  // reflecting boundary
            }
            const int n_i = n[static_cast<std::size_t>(i)];
            if (n_i > 0) {
                const double win = static_cast<double>(n_i) / (total + 1);
                neighbor[static_cast<std::size_t>(i)] -= 1;
                row.emplace_back(tm.index_of(neighbor), win * dequeue_prob);
                neighbor[static_cast<std::size_t>(i)] += 1;
                self_loop += win * (1.0 - dequeue_prob);
            }
        }
        if (self_loop > 0.0) row.emplace_back(static_cast<int>(si), self_loop);
    }
    return tm;
}

// Stationary vector by power iteration on the lazy chain (I + P)/2; the lazy
// transform guarantees aperiodicity without moving the stationary vector.
// Converges to an L1 residual ||vP - v|| below tol.
inline std::vector<double> solve_stationary(const TransitionModel& tm, double tol = 1e-9,
                                            int max_iters = 200000,
                                            const std::vector<double>* initial = nullptr) {
    if (!(tol > 0.0) || tol > 1e-6)
        throw std::invalid_argument("solve_stationary: tol must be in (0, 1e-6]");
    const std::size_t n = tm.states.size();
    if (n == 0) throw std::invalid_argument("solve_stationary: empty model");

    std::vector<double> v;
    if (initial) {
        if (initial->size() != n)
            throw std::invalid_argument("solve_stationary: initial vector size mismatch");
        v = *initial;
        double sum = 0.0;
        for (double x : v) {
            if (x < 0.0) throw std::invalid_argument("solve_stationary: negative initial entry");
            sum += x;
        }
        if (!(sum > 0.0)) throw std::invalid_argument("solve_stationary: zero initial vector");
        for (double& x : v) x /= sum;
    } else {
        v.assign(n, 1.0 / static_cast<double>(n));
    }

    std::vector<double> next(n);
    auto apply = [&](const std::vector<double>& from, std::vector<double>& to) {
        std::fill(to.begin(), to.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double mass = from[i];
            if (mass == 0.0) continue;
            for (const auto& [j, p] : tm.rows[i]) to[static_cast<std::size_t>(j)] += mass * p;
        }
    };

    for (int iter = 0; iter < max_iters; ++iter) {
        apply(v, next);
        double residual = 0.0;  // ||vP - v||_1
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            residual += std::fabs(next[i] - v[i]);
            next[i] = 0.5 * v[i] + 0.5 * next[i];  // lazy step
            sum += next[i];
        }
        for (double& x : next) x /= sum;
        v.swap(next);
        if (residual < tol) return v;
    }
    throw std::runtime_error("solve_stationary: no convergence after " +
                             std::to_string(max_iters) + " iterations");
}

} // namespace wlantp
