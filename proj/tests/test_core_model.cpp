#include "btcecon/core_model.hpp"
#include "btcecon/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace btcecon;

namespace {

MinerUnit rig(double theta, double p, double hashrate = 100.0) {
    return MinerUnit(Kilowatts(theta), UsdPerKwh(p), ThPerS(hashrate));
}

MarketState market(double x, double fees, double br, double h) {
    return MarketState(UsdPerBtc(x), UsdPerDay(fees), BtcPerDay(br), ThPerS(h));
}

void expect_rel(double actual, double expected, double tol) {
    EXPECT_LE(std::abs(actual - expected), tol * std::max(std::abs(expected), 1e-300))
        << "actual " << actual << " expected " << expected;
}

}  // namespace

TEST(DailyEnergyCost, ThreeKilowattRig) {
    EXPECT_DOUBLE_EQ(daily_energy_cost(rig(3, 0.15)).value(), 10.8);
}

TEST(DailyEnergyCost, FreeElectricity) {
    EXPECT_EQ(daily_energy_cost(rig(3, 0.0)).value(), 0.0);
}

TEST(DailyEnergyCost, UnitCase) {
    EXPECT_EQ(daily_energy_cost(rig(1, 1)).value(), 24.0);
}

TEST(MarginalRevenue, OctoberReconstruction) {
    // (3e5 + 19000 * 900) * 100 / 2.23e8
    const double expected = 17'400'000.0 * 100.0 / 2.23e8;
    expect_rel(marginal_revenue(market(19000, 3e5, 900, 2.23e8), rig(3, 0.15)).value(), expected, 1e-12);
    EXPECT_NEAR(expected, 7.80, 0.005);
}

TEST(MarginalRevenue, NoRevenueSources) {
    EXPECT_EQ(marginal_revenue(market(0, 0, 900, 1e8), rig(3, 0.15)).value(), 0.0);
}

TEST(MarginalRevenue, BlockRewardOnly) {
    expect_rel(marginal_revenue(market(20000, 0, 900, 1.8e8), rig(3, 0.15)).value(), 10.0, 1e-12);
}

TEST(MarginalRevenue, ZeroHashrateIsAnError) {
    EXPECT_THROW((void)marginal_revenue(market(20000, 0, 900, 0), rig(3, 0.15)), ValidationError);
    EXPECT_THROW((void)marginal_profit(market(20000, 0, 900, 0), rig(3, 0.15)), ValidationError);
}

TEST(MarginalProfit, OctoberAnchorNearMinusThree) {
    const double mp = marginal_profit(market(19000, 3e5, 900, 2.23e8), rig(3, 0.15)).value();
    EXPECT_NEAR(mp, -3.0, 0.05);
}

TEST(MarginalProfit, BreakEvenByConstruction) {
    // R * 100 / H = 10.8  with R = 1.8e7  =>  H = 1.8e9 / 10.8
    const double h = 1.8e9 / 10.8;
    EXPECT_NEAR(marginal_profit(market(20000, 0, 900, h), rig(3, 0.15)).value(), 0.0, 1e-9);
}

TEST(MarginalProfit, PureCost) {
    EXPECT_DOUBLE_EQ(marginal_profit(market(0, 0, 900, 1e8), rig(3, 0.15)).value(), -10.8);
}

TEST(CompetitiveEquilibrium, BlockRewardRevenue) {
    const ThPerS h = competitive_equilibrium_hashrate(revenue_bundle(market(20000, 0, 900, 1)), rig(3, 0.15));
    expect_rel(h.value(), 1.8e9 / 10.8, 1e-12);
    EXPECT_NEAR(h.value(), 1.6667e8, 0.0001e8);
}

TEST(CompetitiveEquilibrium, ZeroRevenueShutsNetworkDown) {
    EXPECT_EQ(competitive_equilibrium_hashrate(UsdPerDay(0), rig(3, 0.15)).value(), 0.0);
    EXPECT_EQ(competitive_equilibrium_hashrate(UsdPerDay(0), rig(3, 0.0)).value(), 0.0);
}

TEST(CompetitiveEquilibrium, DoublingPriceHalvesHashrate) {
    const double a = competitive_equilibrium_hashrate(UsdPerDay(1.8e7), rig(3, 0.15)).value();
    const double b = competitive_equilibrium_hashrate(UsdPerDay(1.8e7), rig(3, 0.30)).value();
    expect_rel(b, a / 2, 1e-12);
}

TEST(CompetitiveEquilibrium, Errors) {
    EXPECT_THROW((void)competitive_equilibrium_hashrate(UsdPerDay(1.0), rig(3, 0.0)), ValidationError);
    EXPECT_THROW((void)competitive_equilibrium_hashrate(UsdPerDay(-1.0), rig(3, 0.15)), ValidationError);
}

TEST(ElectricityShock, DoublingPrice) {
    const UsdPerDay r(1.8e7);
    const MinerUnit unit = rig(3, 0.15);
    const ThPerS h = competitive_equilibrium_hashrate(r, unit);
    const MarketState old(UsdPerBtc(20000), UsdPerDay(0), BtcPerDay(900), h);
    expect_rel(supply_after_electricity_shock(old, unit, UsdPerKwh(0.30)).value(), 8.333333333333333e7, 1e-12);
    expect_rel(supply_after_electricity_shock(old, unit, UsdPerKwh(0.15)).value(), h.value(), 1e-15);
    expect_rel(supply_after_electricity_shock(old, unit, UsdPerKwh(0.10)).value(), 2.5e8, 1e-12);
}

TEST(ElectricityShock, RevenueSideUnchanged) {
    const MinerUnit unit = rig(3, 0.15);
    const MarketState old(UsdPerBtc(20000), UsdPerDay(0), BtcPerDay(900),
                          competitive_equilibrium_hashrate(UsdPerDay(1.8e7), unit));
    const ThPerS shocked = supply_after_electricity_shock(old, unit, UsdPerKwh(0.4));
    const MarketState after(old.exchange_rate(), old.fees(), old.block_reward(), shocked);
    EXPECT_NEAR(marginal_profit(after, unit.with_electricity(UsdPerKwh(0.4))).value(), 0.0, 1e-9);
}

TEST(ElectricityShock, Errors) {
    const MinerUnit unit = rig(3, 0.15);
    const MarketState at_eq(UsdPerBtc(20000), UsdPerDay(0), BtcPerDay(900),
                            competitive_equilibrium_hashrate(UsdPerDay(1.8e7), unit));
    EXPECT_THROW((void)supply_after_electricity_shock(at_eq, unit, UsdPerKwh(0.0)), ValidationError);
    EXPECT_THROW((void)supply_after_electricity_shock(at_eq, unit, UsdPerKwh(-1.0)), ValidationError);
    const MarketState off_eq(UsdPerBtc(20000), UsdPerDay(0), BtcPerDay(900), ThPerS(1.5e8));
    EXPECT_THROW((void)supply_after_electricity_shock(off_eq, unit, UsdPerKwh(0.3)), ValidationError);
}

TEST(DomainTypes, RejectInvalidFields) {
    EXPECT_THROW(market(-1, 0, 0, 0), ValidationError);
    EXPECT_THROW(market(0, -1, 0, 0), ValidationError);
    EXPECT_THROW(market(0, 0, -1, 0), ValidationError);
    EXPECT_THROW(market(0, 0, 0, -1), ValidationError);
    EXPECT_THROW(market(0, 0, 0, NAN), ValidationError);
    EXPECT_THROW(rig(0, 0.15), ValidationError);
    EXPECT_THROW(rig(3, -0.1), ValidationError);
    EXPECT_THROW(rig(3, 0.15, 0), ValidationError);
}

class CoreProperties : public ::testing::Test {
protected:
    std::mt19937_64 rng{20221015};
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
};

TEST_F(CoreProperties, ZeroProfitFixedPoint) {
    for (int i = 0; i < 1000; ++i) {
        const UsdPerDay r(log_uniform(1.0, 1e10));
        const MinerUnit unit = rig(uniform(0.1, 10), uniform(0.001, 1), log_uniform(1, 1e4));
        const ThPerS h = competitive_equilibrium_hashrate(r, unit);
        const double mp = marginal_profit(r, h, unit).value();
        EXPECT_LE(std::abs(mp), 1e-12 * daily_energy_cost(unit).value());
    }
}

TEST_F(CoreProperties, Homogeneity) {
    for (int i = 0; i < 200; ++i) {
        const double x = uniform(0, 1e5), f = uniform(0, 1e7), br = uniform(1, 1e4), c = log_uniform(1e-3, 1e3);
        const MinerUnit unit = rig(uniform(0.5, 5), uniform(0.01, 0.5));
        const double base = competitive_equilibrium_hashrate(revenue_bundle(UsdPerDay(f), UsdPerBtc(x), BtcPerDay(br)), unit).value();
        const double scaled =
            competitive_equilibrium_hashrate(revenue_bundle(UsdPerDay(c * f), UsdPerBtc(c * x), BtcPerDay(br)), unit).value();
        expect_rel(scaled, c * base, 1e-12);
    }
}

TEST_F(CoreProperties, InversePriceLaw) {
    for (int i = 0; i < 200; ++i) {
        const UsdPerDay r(log_uniform(1, 1e9));
        const double theta = uniform(0.5, 5), p = uniform(0.01, 0.5), c = log_uniform(1e-2, 1e2);
        expect_rel(competitive_equilibrium_hashrate(r, rig(theta, c * p)).value(),
                   competitive_equilibrium_hashrate(r, rig(theta, p)).value() / c, 1e-12);
    }
}

TEST_F(CoreProperties, ProfitDecreasesInHashrateAndPrice) {
    for (int i = 0; i < 200; ++i) {
        const UsdPerDay r(log_uniform(1, 1e9));
        const double h1 = log_uniform(1e3, 1e9), h2 = h1 * uniform(1.001, 10);
        const double p1 = uniform(0.01, 0.5), p2 = p1 * uniform(1.001, 3);
        EXPECT_GT(marginal_profit(r, ThPerS(h1), rig(3, p1)).value(), marginal_profit(r, ThPerS(h2), rig(3, p1)).value());
        EXPECT_GT(marginal_profit(r, ThPerS(h1), rig(3, p1)).value(), marginal_profit(r, ThPerS(h1), rig(3, p2)).value());
    }
}

TEST_F(CoreProperties, UnitSizeDoesNotMatterAtEquilibrium) {
    for (int i = 0; i < 200; ++i) {
        const UsdPerDay r(log_uniform(1, 1e9));
        const double theta = uniform(0.5, 5), p = uniform(0.01, 0.5);
        const MinerUnit small = rig(theta, p, 100), big = rig(theta, p, log_uniform(1, 1e5));
        EXPECT_NEAR(marginal_profit(r, competitive_equilibrium_hashrate(r, small), small).value(), 0.0, 1e-12 * 24 * theta * p);
        EXPECT_NEAR(marginal_profit(r, competitive_equilibrium_hashrate(r, big), big).value(), 0.0, 1e-12 * 24 * theta * p);
    }
}
