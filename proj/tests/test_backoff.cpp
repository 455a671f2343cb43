#include <catch2/catch.hpp>

#include <chrono>
#include <cmath>

#include "wlantp/backoff.hpp"

using namespace wlantp;

TEST_CASE("single contender attempt probability is 2/(cw_min+2)") {
    const BackoffParams b{31, 1023, 7};
    CHECK(solve_attempt_probability(1, b) == Approx(2.0 / 33.0).epsilon(1e-10));
    const BackoffParams g{15, 1023, 7};
    CHECK(solve_attempt_probability(1, g) == Approx(2.0 / 17.0).epsilon(1e-10));
}

TEST_CASE("attempt probability strictly decreases with contention") {
    const BackoffParams bp{31, 1023, 7};
    double prev = 2.0;
    for (int n = 1; n <= 40; ++n) {
        const double beta = solve_attempt_probability(n, bp);
        CHECK(beta > 0.0);
        CHECK(beta <= 1.0);
        CHECK(beta < prev);
        prev = beta;
    }
}

TEST_CASE("fixed point residual is within tolerance at the solution") {
    const BackoffParams bp{31, 1023, 7};
    for (int n : {1, 2, 3, 5, 8, 13, 21, 34}) {
        const double beta = solve_attempt_probability(n, bp, 1e-10);
        const double gamma = 1.0 - std::pow(1.0 - beta, n - 1);
        CHECK(std::fabs(beta - detail::attempt_rate(gamma, bp)) < 1e-10);
    }
}

TEST_CASE("attempt table matches fresh solves bit for bit") {
    const BackoffParams bp{15, 1023, 7};
    const AttemptProbTable table(20, bp);
    for (int n = 1; n <= 20; ++n)
        CHECK(table(n) == solve_attempt_probability(n, bp, 1e-10));
}

TEST_CASE("attempt table for 100 contenders builds quickly") {
    const BackoffParams bp{31, 1023, 7};
    const auto start = std::chrono::steady_clock::now();
    const AttemptProbTable table(100, bp);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    CHECK(table.size() == 100);
    CHECK(std::chrono::duration<double>(elapsed).count() < 1.0);
    CHECK(table(100) < table(1));
}

TEST_CASE("backoff stage bookkeeping") {
    const BackoffParams b{31, 1023, 7};
    CHECK(b.max_backoff_stage() == 5);
    CHECK(b.cw_at_stage(0) == 31);
    CHECK(b.cw_at_stage(1) == 63);
    CHECK(b.cw_at_stage(5) == 1023);
    CHECK(b.cw_at_stage(9) == 1023);  // saturates, never exceeds cw_max
    const BackoffParams g{15, 1023, 7};
    CHECK(g.max_backoff_stage() == 6);
}

TEST_CASE("invalid inputs are rejected") {
    const BackoffParams bp{31, 1023, 7};
    CHECK_THROWS_AS(solve_attempt_probability(0, bp), std::invalid_argument);
    CHECK_THROWS_AS(solve_attempt_probability(2, bp, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_attempt_probability(2, bp, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(solve_attempt_probability(2, BackoffParams{1023, 31, 7}),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_attempt_probability(2, BackoffParams{30, 1023, 7}),
                    std::invalid_argument);
    CHECK_THROWS_AS(AttemptProbTable(0, bp), std::invalid_argument);
}
