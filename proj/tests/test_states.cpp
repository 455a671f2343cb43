#include <catch2/catch.hpp>

#include <cmath>
#include <random>
#include <set>

#include "wlantp/states.hpp"

using namespace wlantp;

namespace {

MixProbabilities random_mix(int k, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    MixProbabilities mix;
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
        mix.p.push_back(u(rng));
        sum += mix.p.back();
    }
    for (double& p : mix.p) p /= sum;
    return mix;
}

} // namespace

TEST_CASE("state enumeration counts match the binomial formula") {
    CHECK(enumerate_states(2, 1).size() == 3);   // (0,0), (1,0), (0,1)
    CHECK(enumerate_states(4, 2).size() == 15);
    CHECK(state_count(6, 30) == 1'947'792);

    std::size_t count = 0;
    for_each_state(6, 30, [&](std::span<const int>) { ++count; });
    CHECK(count == 1'947'792);

    const auto small = enumerate_states(2, 1);
    CHECK(small[0] == StateVector{0, 0});
    const std::set<StateVector> unique(small.begin(), small.end());
    CHECK(unique.size() == small.size());
}

TEST_CASE("state enumeration has no duplicates and visits shells in order") {
    const auto states = enumerate_states(3, 4);
    CHECK(states.size() == state_count(3, 4));
    std::set<StateVector> seen;
    int last_total = 0;
    for (const auto& s : states) {
        CHECK(seen.insert(s).second);
        const int total = total_backlogged(s);
        CHECK(total >= last_total);  // ascending shells
        last_total = total;
    }
}

TEST_CASE("state budget guard rejects oversized spaces") {
    CHECK_THROWS_AS(enumerate_states(6, 100, 1'000'000), std::length_error);
    CHECK_THROWS_AS(check_state_budget(8, 170), std::length_error);
    CHECK_NOTHROW(check_state_budget(6, 30));
}

TEST_CASE("unnormalized stationary weight fixtures") {
    const MixProbabilities mix{{0.2, 0.3, 0.2, 0.3}};
    const StateVector origin{0, 0, 0, 0};
    CHECK(pi_unnormalized(origin, mix, 1.0) == 1.0);
    CHECK(pi_unnormalized(origin, mix, 2.0) == 1.0);

    for (int i = 0; i < 4; ++i) {
        StateVector one_hot{0, 0, 0, 0};
        one_hot[static_cast<std::size_t>(i)] = 1;
        CHECK(pi_unnormalized(one_hot, mix, 1.0) ==
              Approx(2.0 * mix.p[static_cast<std::size_t>(i)]).epsilon(1e-15));
    }
}

TEST_CASE("detailed balance holds exactly across random state pairs") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> ks(1, 5), ns(0, 6);
    for (double load : {0.5, 1.0, 2.0}) {
        for (int trial = 0; trial < 200; ++trial) {
            const int k = ks(rng);
            const MixProbabilities mix = random_mix(k, rng);
            StateVector state(static_cast<std::size_t>(k));
            for (auto& n : state) n = ns(rng);
            const int total = total_backlogged(state);

            for (int i = 0; i < k; ++i) {
                StateVector up = state;
                up[static_cast<std::size_t>(i)] += 1;
                const double lhs = pi_unnormalized(state, mix, load) *
                                   mix.p[static_cast<std::size_t>(i)] / (total + 1);
                const double rhs = (1.0 / load) * pi_unnormalized(up, mix, load) *
                                   (state[static_cast<std::size_t>(i)] + 1.0) / (total + 2);
                CHECK(lhs == Approx(rhs).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("normalization constant matches the closed form") {
    CHECK(normalization_constant(1.0, 0) == 1.0);
    // Series limits: 2e for unit load, 3e^2 for load 2.
    CHECK(normalization_constant(1.0, 40) == Approx(2.0 * std::exp(1.0)).epsilon(1e-12));
    CHECK(normalization_constant(1.0, 40) == Approx(5.43656365691809).epsilon(1e-12));
    CHECK(normalization_constant(2.0, 60) == Approx(3.0 * std::exp(2.0)).epsilon(1e-12));
    CHECK(normalization_constant(2.0, 60) == Approx(22.16716829679195).epsilon(1e-7));
    CHECK(normalization_constant(0.5, 40) ==
          Approx(exact_normalization_constant(0.5)).epsilon(1e-12));
    CHECK_THROWS_AS(normalization_constant(1.0, -1), std::invalid_argument);
    CHECK_THROWS_AS(normalization_constant(1.0, 200), std::invalid_argument);
}

TEST_CASE("normalization constant equals the state-space sum for any mix") {
    std::mt19937 rng(7);
    for (double load : {0.5, 1.0, 2.0}) {
        const MixProbabilities mix = random_mix(3, rng);
        KahanSum sum;
        for_each_state(3, 12, [&](std::span<const int> s) {
            sum.add(pi_unnormalized(s, mix, load));
        });
        CHECK(sum.value() == Approx(normalization_constant(load, 12)).epsilon(1e-12));
    }
}

TEST_CASE("stationary distribution is normalized with near-total mass") {
    for (double load : {0.5, 1.0, 2.0}) {
        const MixProbabilities mix{{0.5, 0.3, 0.2}};
        const auto dist = stationary_distribution(mix, load, 30);
        KahanSum sum;
        for (const auto& [state, prob] : dist.support) {
            CHECK(prob > 0.0);
            sum.add(prob);
        }
        CHECK(sum.value() == Approx(1.0).epsilon(1e-12));
        CHECK(dist.captured_mass >= 1.0 - 1e-9);
        CHECK(dist.captured_mass <= 1.0 + 1e-12);
    }
}

TEST_CASE("one-dimensional chain weights follow the birth ladder") {
    // With a single class and unit load, pi(n) ~ (n+1)/n!, so pi(1) = 2 pi(0).
    const MixProbabilities mix{{1.0}};
    const auto dist = stationary_distribution(mix, 1.0, 20);
    REQUIRE(dist.support.size() == 21);
    CHECK(dist.support[0].first == StateVector{0});
    CHECK(dist.support[1].second == Approx(2.0 * dist.support[0].second).epsilon(1e-12));
    CHECK(dist.support[2].second == Approx(1.5 * dist.support[0].second).epsilon(1e-12));
}

TEST_CASE("marginal mean of each coordinate is load p_i (load+2)/(load+1)") {
    // Size-biasing by (N+1) shifts the plain product-Poisson mean load*p_i
    // up by the factor (load+2)/(load+1); verified here by direct summation.
    const MixProbabilities mix{{0.3, 0.7}};
    for (double load : {0.5, 1.0, 2.0}) {
        const auto dist = stationary_distribution(mix, load, 40);
        double mean0 = 0.0, mean1 = 0.0;
        for (const auto& [state, prob] : dist.support) {
            mean0 += state[0] * prob;
            mean1 += state[1] * prob;
        }
        const double bias = (load + 2.0) / (load + 1.0);
        CHECK(mean0 == Approx(load * 0.3 * bias).epsilon(1e-6));
        CHECK(mean1 == Approx(load * 0.7 * bias).epsilon(1e-6));
    }
}

TEST_CASE("default truncation grows with the chain load") {
    CHECK(default_n_max(0.5) == 30);
    CHECK(default_n_max(1.0) == 30);
    CHECK(default_n_max(2.0) == 30);
    CHECK(default_n_max(4.0) == 40);
}

TEST_CASE("invalid stationary-weight arguments are rejected") {
    const MixProbabilities mix{{0.5, 0.5}};
    CHECK_THROWS_AS(pi_unnormalized(StateVector{1}, mix, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(pi_unnormalized(StateVector{1, -1}, mix, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(pi_unnormalized(StateVector{1, 1}, mix, 0.0), std::invalid_argument);
    const MixProbabilities not_normalized{{0.5, 0.6}};
    CHECK_THROWS_AS(not_normalized.validate(), std::invalid_argument);
    const MixProbabilities negative{{-0.5, 1.5}};
    CHECK_THROWS_AS(negative.validate(), std::invalid_argument);
}
