#include "btcecon/errors.hpp"
#include "btcecon/oligopoly.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace btcecon;

namespace {

MinerUnit rig(double theta, double p, double hashrate = 100.0) {
    return MinerUnit(Kilowatts(theta), UsdPerKwh(p), ThPerS(hashrate));
}

// Straightforward transcription of the turn-taking rule, written
// independently of the library: round-robin, add a rig iff the gain is
// strictly positive, stop after a full idle pass.
struct NaiveOutcome {
    double hashrate;
    std::vector<long long> rigs;
};

NaiveOutcome naive_dynamics(std::size_t n, double r, double theta, double p, double u, double start) {
    const double c = 24.0 * theta * p;
    std::vector<long long> rigs(n, 0);
    long long total = 0;
    const double base = start / static_cast<double>(n);
    std::size_t idle = 0;
    for (std::size_t turn = 0; idle < n; ++turn) {
        const std::size_t i = turn % n;
        const double h = start + static_cast<double>(total) * u;
        const double mine = base + static_cast<double>(rigs[i]) * u;
        const double k = h > 0 ? mine / h : 1.0 / static_cast<double>(n);
        const double gain = u * (1.0 - k) * r / (h + u) - c;
        if (gain > 0) {
            ++rigs[i];
            ++total;
            idle = 0;
        } else {
            ++idle;
        }
    }
    return {start + static_cast<double>(total) * u, rigs};
}

}  // namespace

TEST(FirmProfit, SymmetricAtEquilibrium) {
    const MinerUnit unit = rig(3, 0.15);
    const UsdPerDay r(1.8e7);
    for (std::size_t n : {1u, 2u, 5u, 10u}) {
        const auto cfg = OligopolyConfig::symmetric(n, r, unit);
        const auto eq = symmetric_equilibrium(n, r, unit);
        for (std::size_t i = 0; i < n; ++i)
            EXPECT_NEAR(firm_profit(cfg, eq.hashrate, i).value(), 1.8e7 / double(n * n), 1e-9 * 1.8e7);
    }
}

TEST(FirmProfit, MonopolistAtZeroHashrate) {
    const auto cfg = OligopolyConfig::symmetric(1, UsdPerDay(1.8e7), rig(3, 0.15));
    EXPECT_EQ(firm_profit(cfg, ThPerS(0), 0).value(), 1.8e7);
}

TEST(FirmProfit, AsymmetricShares) {
    const OligopolyConfig cfg({0.5, 0.3, 0.2}, UsdPerDay(1e6), rig(3, 0.15));
    const auto outcomes = firm_outcomes(cfg, ThPerS(1e6));
    // cost = 10.8 * 1e4 = 108000
    ASSERT_EQ(outcomes.size(), 3u);
    EXPECT_NEAR(outcomes[0].profit.value(), 0.5 * 892000, 1e-6);
    EXPECT_NEAR(outcomes[1].profit.value(), 0.3 * 892000, 1e-6);
    EXPECT_NEAR(outcomes[2].profit.value(), 0.2 * 892000, 1e-6);
    EXPECT_NEAR(outcomes[2].hashrate.value(), 2e5, 1e-6);
}

TEST(OligopolyConfig, Validation) {
    const MinerUnit unit = rig(3, 0.15);
    EXPECT_THROW(OligopolyConfig({}, UsdPerDay(1), unit), ValidationError);
    EXPECT_THROW(OligopolyConfig({0.5, 0.4}, UsdPerDay(1), unit), ValidationError);
    EXPECT_THROW(OligopolyConfig({1.5, -0.5}, UsdPerDay(1), unit), ValidationError);
    EXPECT_THROW(OligopolyConfig({1.0}, UsdPerDay(-1), unit), ValidationError);
    EXPECT_THROW(OligopolyConfig::symmetric(0, UsdPerDay(1), unit), ValidationError);
    const auto cfg = OligopolyConfig::symmetric(2, UsdPerDay(1), unit);
    EXPECT_THROW((void)firm_profit(cfg, ThPerS(1), 2), ValidationError);
    EXPECT_THROW((void)marginal_delta_adding_unit(cfg, ThPerS(-1), 0), ValidationError);
}

TEST(MarginalDelta, DuopolyNearEquilibrium) {
    const auto cfg = OligopolyConfig::symmetric(2, UsdPerDay(1.8e7), rig(3, 0.15));
    const auto d = marginal_delta_adding_unit(cfg, ThPerS(8.333e7), 0);
    // 100 * 0.5 * 1.8e7 / (8.333e7 + 100) - 10.8
    EXPECT_NEAR(d[0].value(), 9e8 / 83330100.0 - 10.8, 1e-12);
    EXPECT_GT(d[0].value(), 0.0);
    EXPECT_NEAR(d[1].value(), -9e8 / 83330100.0, 1e-12);
}

TEST(MarginalDelta, SumIsMinusCost) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 9;
        std::vector<double> w(n);
        for (auto& x : w) x = u01(rng) + 0.01;
        const double s = std::accumulate(w.begin(), w.end(), 0.0);
        for (auto& x : w) x /= s;
        w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
        const OligopolyConfig cfg(w, UsdPerDay(1e7 * (1 + u01(rng))), rig(3, 0.15));
        const auto d = marginal_delta_adding_unit(cfg, ThPerS(1e7 * (1 + u01(rng))), trial % n);
        double total = 0;
        for (const auto& x : d) total += x.value();
        // The rig's revenue is redistributed, only its cost leaves the industry.
        EXPECT_NEAR(total, -10.8, 1e-9);
        for (std::size_t i = 0; i < n; ++i)
            if (i != static_cast<std::size_t>(trial) % n) EXPECT_LT(d[i].value(), 0.0);
    }
}

TEST(SymmetricEquilibrium, Duopoly) {
    const auto eq = symmetric_equilibrium(2, UsdPerDay(1.8e7), rig(3, 0.15));
    EXPECT_NEAR(eq.hashrate.value(), 83333333.33333333, 1e-6);
    EXPECT_DOUBLE_EQ(eq.per_firm_profit.value(), 4.5e6);
}

TEST(SymmetricEquilibrium, MonopolistBuildsNothing) {
    const auto eq = symmetric_equilibrium(1, UsdPerDay(1.8e7), rig(3, 0.15));
    EXPECT_EQ(eq.hashrate.value(), 0.0);
    EXPECT_EQ(eq.per_firm_profit.value(), 1.8e7);
}

TEST(SymmetricEquilibrium, ApproachesCompetitiveLimit) {
    const MinerUnit unit = rig(3, 0.15);
    const UsdPerDay r(1.8e7);
    const double comp = competitive_equilibrium_hashrate(r, unit).value();
    double prev = -1;
    for (std::size_t n = 1; n <= 200; ++n) {
        const double h = symmetric_equilibrium(n, r, unit).hashrate.value();
        EXPECT_NEAR(h / comp, 1.0 - 1.0 / double(n), 1e-12);
        EXPECT_GT(h, prev);
        prev = h;
    }
}

TEST(SymmetricEquilibrium, Errors) {
    EXPECT_THROW((void)symmetric_equilibrium(0, UsdPerDay(1), rig(3, 0.15)), ValidationError);
    EXPECT_THROW((void)symmetric_equilibrium(2, UsdPerDay(1), rig(3, 0.0)), ValidationError);
    EXPECT_THROW((void)symmetric_equilibrium(2, UsdPerDay(-1), rig(3, 0.15)), ValidationError);
}

TEST(Dynamics, DuopolyReachesClosedForm) {
    const MinerUnit unit = rig(3, 0.15);
    const auto res = best_response_dynamics(2, UsdPerDay(1.8e7), unit, ThPerS(0), 1'000'000'000);
    EXPECT_NEAR(res.hashrate.value(), 83333333.33, 100.0);
    EXPECT_EQ(res.units_added[0] + res.units_added[1], 833334u);
    EXPECT_LE(res.trace.size(), 4u);
}

TEST(Dynamics, MonopolistIdles) {
    const auto res = best_response_dynamics(1, UsdPerDay(1.8e7), rig(3, 0.15), ThPerS(0), 10);
    EXPECT_EQ(res.hashrate.value(), 0.0);
    EXPECT_EQ(res.iterations, 1u);
    EXPECT_TRUE(res.trace.empty());
}

TEST(Dynamics, ZeroRevenueAddsNothing) {
    const auto res = best_response_dynamics(4, UsdPerDay(0), rig(3, 0.15), ThPerS(0), 100);
    EXPECT_EQ(res.hashrate.value(), 0.0);
    EXPECT_EQ(res.iterations, 4u);
}

TEST(Dynamics, StartAboveEquilibriumStays) {
    const auto res = best_response_dynamics(3, UsdPerDay(1e5), rig(3, 0.15), ThPerS(1e7), 100);
    EXPECT_EQ(res.hashrate.value(), 1e7);
    for (double k : res.shares) EXPECT_NEAR(k, 1.0 / 3.0, 1e-15);
}

TEST(Dynamics, MaxItersExceeded) {
    EXPECT_THROW((void)best_response_dynamics(2, UsdPerDay(1.8e7), rig(3, 0.15), ThPerS(0), 1000, TraceMode::full),
                 ComputationError);
    EXPECT_THROW((void)best_response_dynamics(2, UsdPerDay(1.8e7), rig(3, 0.15), ThPerS(0), 1000), ComputationError);
}

TEST(Dynamics, MatchesNaiveReference) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 12;
        const double theta = 0.5 + 4.5 * u01(rng), p = 0.01 + 0.3 * u01(rng), u = 10 + 200 * u01(rng);
        const double c = 24 * theta * p;
        const double r = c * (50 + 3000 * u01(rng));  // at most a few thousand rigs
        const double start = trial % 3 == 0 ? 0.0 : u * 100 * u01(rng);
        const MinerUnit unit = rig(theta, p, u);
        const NaiveOutcome ref = naive_dynamics(n, r, theta, p, u, start);
        for (TraceMode mode : {TraceMode::full, TraceMode::compressed}) {
            const auto res = best_response_dynamics(n, UsdPerDay(r), unit, ThPerS(start), 100'000'000, mode);
            EXPECT_EQ(res.hashrate.value(), ref.hashrate) << "trial " << trial;
            for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(static_cast<long long>(res.units_added[i]), ref.rigs[i]);
        }
    }
}

TEST(Dynamics, FullTraceRecordsEveryRig) {
    const MinerUnit unit = rig(3, 0.15);
    const auto res = best_response_dynamics(3, UsdPerDay(10.8 * 600), unit, ThPerS(0), 1'000'000, TraceMode::full);
    const std::uint64_t total = std::accumulate(res.units_added.begin(), res.units_added.end(), std::uint64_t{0});
    EXPECT_EQ(res.trace.size(), total);
    for (std::size_t i = 1; i < res.trace.size(); ++i) {
        EXPECT_GT(res.trace[i].iteration, res.trace[i - 1].iteration);
        EXPECT_GT(res.trace[i].hashrate, res.trace[i - 1].hashrate);
        EXPECT_GT(res.trace[i].delta.value(), 0.0);
    }
}

TEST(Dynamics, CompressedTraceSumsToTotal) {
    const auto res = best_response_dynamics(7, UsdPerDay(3e6), rig(3, 0.15), ThPerS(0), 1'000'000'000);
    std::uint64_t units = 0;
    for (const auto& s : res.trace) units += s.units;
    EXPECT_EQ(units, std::accumulate(res.units_added.begin(), res.units_added.end(), std::uint64_t{0}));
    ASSERT_FALSE(res.trace.empty());
    EXPECT_FALSE(res.trace.front().firm.has_value());
}

TEST(Dynamics, WithinOneUnitOfClosedForm) {
    std::mt19937_64 rng(2022);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (std::size_t n = 2; n <= 50; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            const double theta = 0.5 + 4.5 * u01(rng), p = 0.02 + 0.3 * u01(rng);
            const double r = std::exp(std::log(1e4) + u01(rng) * std::log(1e4)) * 24 * theta * p;
            const MinerUnit unit = rig(theta, p);
            const auto res = best_response_dynamics(n, UsdPerDay(r), unit, ThPerS(0), 1'000'000'000'000);
            const double closed = symmetric_equilibrium(n, UsdPerDay(r), unit).hashrate.value();
            EXPECT_LE(std::abs(res.hashrate.value() - closed), unit.hashrate().value()) << "n=" << n;
        }
    }
}

TEST(Dynamics, IndependentOfTurnOrderWithinOneUnit) {
    // Random turn order converges to the same neighbourhood.
    std::mt19937_64 rng(99);
    const double theta = 3, p = 0.15, u = 100, c = 10.8;
    for (std::size_t n : {2u, 3u, 8u}) {
        const double r = c * 5000;
        std::vector<long long> rigs(n, 0);
        long long total = 0;
        std::size_t idle_streak = 0;
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        while (idle_streak < n) {
            std::shuffle(order.begin(), order.end(), rng);
            idle_streak = 0;
            for (std::size_t i : order) {
                const double h = double(total) * u;
                const double k = h > 0 ? double(rigs[i]) * u / h : 1.0 / double(n);
                if (u * (1 - k) * r / (h + u) - c > 0) {
                    ++rigs[i];
                    ++total;
                } else {
                    ++idle_streak;
                }
            }
        }
        const double closed = symmetric_equilibrium(n, UsdPerDay(r), rig(theta, p)).hashrate.value();
        EXPECT_LE(std::abs(double(total) * u - closed), 2 * u);
    }
}
