#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wlantp/phy.hpp"

namespace wlantp {

// Binary exponential backoff configuration. The contention window at stage j
// is min(2^j (cw_min+1), cw_max+1) - 1; the stage stops growing after
// retry_limit attempts but frames are never dropped.
struct BackoffParams {
    int cw_min = 31;
    int cw_max = 1023;
    int retry_limit = 7;

    static BackoffParams from(const PhyParams& p, int retry_limit = 7) {
        return BackoffParams{p.cw_min, p.cw_max, retry_limit};
    }

    int max_backoff_stage() const {
        int stage = 0;
        long long cw = cw_min;
        while (cw < cw_max) {
            cw = 2 * (cw + 1) - 1;
            ++stage;
        }
        return stage;
    }

    int cw_at_stage(int stage) const {
        long long cw = static_cast<long long>(cw_min) + 1;
        for (int j = 0; j < stage && cw < cw_max + 1; ++j) cw *= 2;
        if (cw > cw_max + 1) cw = cw_max + 1;
        return static_cast<int>(cw - 1);
    }

    void validate() const {
        if (cw_min < 1 || cw_min >= cw_max)
            throw std::invalid_argument("BackoffParams: need 1 <= cw_min < cw_max");
        if (!is_power_of_two(static_cast<std::uint64_t>(cw_min) + 1) ||
            !is_power_of_two(static_cast<std::uint64_t>(cw_max) + 1))
            throw std::invalid_argument("BackoffParams: cw+1 must be powers of two");
        if (retry_limit < 0)
            throw std::invalid_argument("BackoffParams: retry_limit must be >= 0");
    }
};

namespace detail {

// Mean attempt rate of one saturated node whose attempts fail independently
// with probability gamma: attempts per slot over the renewal cycle of one
// frame, counting the mean backoff draw plus the attempt slot at each stage.
inline double attempt_rate(double gamma, const BackoffParams& bp) {
    double weight = 1.0;     // gamma^j
    double attempts = 0.0;
    double slots = 0.0;
    for (int j = 0; j <= bp.retry_limit; ++j) {
        const double mean_backoff = 0.5 * bp.cw_at_stage(j);
        attempts += weight;
        slots += weight * (mean_backoff + 1.0);
        weight *= gamma;
    }
    return attempts / slots;
}

} // namespace detail

// Per-slot attempt probability of one node when n_nodes saturated nodes
// contend, from the decoupling fixed point
//   gamma = 1 - (1 - beta)^(n_nodes - 1),   beta = attempt_rate(gamma).
// Solved by damped iteration; the map is monotone, with a bisection
// fallback should the iteration ever stall.
inline double solve_attempt_probability(int n_nodes, const BackoffParams& bp,
                                        double tol = 1e-10) {
    bp.validate();
    if (n_nodes < 1)
        throw std::invalid_argument("solve_attempt_probability: need n_nodes >= 1");
    if (!(tol > 0.0) || tol >= 1e-3)
        throw std::invalid_argument("solve_attempt_probability: tol must be in (0, 1e-3)");

    auto map = [&](double beta) {
        const double gamma = 1.0 - std::pow(1.0 - beta, n_nodes - 1);
        return detail::attempt_rate(gamma, bp);
    };

    double beta = detail::attempt_rate(0.0, bp);
    const int max_iters = 10000;
    for (int i = 0; i < max_iters; ++i) {
        const double next = 0.5 * beta + 0.5 * map(beta);
        const double residual = std::fabs(beta - map(beta));
        if (std::fabs(next - beta) < 0.5 * tol && residual < tol) return next;
        beta = next;
    }

    // Bisection on f(beta) = beta - map(beta), strictly increasing.
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid - map(mid) > 0.0) hi = mid; else lo = mid;
        if (hi - lo < tol) return 0.5 * (lo + hi);
    }
    throw std::runtime_error("solve_attempt_probability: no convergence for n=" +
                             std::to_string(n_nodes));
}

// Memoized attempt probabilities for 1..n_max contenders.
class AttemptProbTable {
  public:
    AttemptProbTable() = default;
    AttemptProbTable(int n_max, const BackoffParams& bp, double tol = 1e-10) {
        if (n_max < 1)
            throw std::invalid_argument("AttemptProbTable: need n_max >= 1");
        beta_.reserve(static_cast<std::size_t>(n_max));
        for (int n = 1; n <= n_max; ++n)
            beta_.push_back(solve_attempt_probability(n, bp, tol));
    }

    // Attempt probability with n contenders, n in [1, size()].
    double operator()(int n_contenders) const {
        return beta_.at(static_cast<std::size_t>(n_contenders) - 1);
    }
    int size() const { return static_cast<int>(beta_.size()); }

  private:
    std::vector<double> beta_;
};

inline AttemptProbTable build_attempt_table(int n_max, const BackoffParams& bp) {
    return AttemptProbTable(n_max, bp);
}

} // namespace wlantp
