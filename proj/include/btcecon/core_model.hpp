#pragma once

// Miner marginal-profit accounting and the competitive hashrate supply
// condition  F + X*BR = 24*theta*p*H / unit_hashrate.

#include "btcecon/units.hpp"

namespace btcecon {

/// Daily network observables.
class MarketState {
public:
    /// Throws ValidationError if any field is negative or non-finite.
    MarketState(UsdPerBtc exchange_rate, UsdPerDay fees, BtcPerDay block_reward, ThPerS hashrate);

    [[nodiscard]] UsdPerBtc exchange_rate() const { return exchange_rate_; }
    [[nodiscard]] UsdPerDay fees() const { return fees_; }
    [[nodiscard]] BtcPerDay block_reward() const { return block_reward_; }
    [[nodiscard]] ThPerS hashrate() const { return hashrate_; }

private:
    UsdPerBtc exchange_rate_;
    UsdPerDay fees_;
    BtcPerDay block_reward_;
    ThPerS hashrate_;
};

/// A single mining rig.
class MinerUnit {
public:
    static constexpr double kDefaultHashrate = 100.0;

    /// Requires hashrate > 0, power > 0, electricity price >= 0.
    MinerUnit(Kilowatts power, UsdPerKwh electricity, ThPerS hashrate = ThPerS(kDefaultHashrate));

    [[nodiscard]] ThPerS hashrate() const { return hashrate_; }
    [[nodiscard]] Kilowatts power() const { return power_; }
    [[nodiscard]] UsdPerKwh electricity() const { return electricity_; }

    [[nodiscard]] MinerUnit with_electricity(UsdPerKwh p) const { return MinerUnit(power_, p, hashrate_); }

private:
    Kilowatts power_;
    UsdPerKwh electricity_;
    ThPerS hashrate_;
};

/// F + X*BR. The only place BTC-denominated reward is converted to USD.
[[nodiscard]] UsdPerDay revenue_bundle(UsdPerDay fees, UsdPerBtc exchange_rate, BtcPerDay block_reward);
[[nodiscard]] UsdPerDay revenue_bundle(const MarketState& state);

/// 24 * theta * p.
[[nodiscard]] UsdPerDay daily_energy_cost(const MinerUnit& unit);

/// Revenue a rig earns at network hashrate H: R * unit_hashrate / H.
/// Throws ValidationError when H is zero.
[[nodiscard]] UsdPerDay marginal_revenue(const MarketState& state, const MinerUnit& unit);
[[nodiscard]] UsdPerDay marginal_revenue(UsdPerDay revenue, ThPerS network_hashrate, const MinerUnit& unit);

/// marginal_revenue - daily_energy_cost; negative when the rig loses money.
[[nodiscard]] UsdPerDay marginal_profit(const MarketState& state, const MinerUnit& unit);
[[nodiscard]] UsdPerDay marginal_profit(UsdPerDay revenue, ThPerS network_hashrate, const MinerUnit& unit);

/// Hashrate at which the marginal rig breaks even:
/// H = unit_hashrate * R / (24 theta p). Zero revenue gives zero hashrate.
/// Throws ValidationError if R < 0, or if theta*p == 0 with R > 0.
[[nodiscard]] ThPerS competitive_equilibrium_hashrate(UsdPerDay revenue, const MinerUnit& unit);

/// Relative tolerance used to decide that a state sits on the competitive
/// supply curve.
inline constexpr double kEquilibriumRelTol = 1e-9;

/// New equilibrium hashrate after the electricity price moves to new_price.
/// The revenue bundle is held fixed, so H' = H * p / p'.
/// Throws ValidationError if new_price <= 0 or `old` is not at equilibrium
/// for `unit` within kEquilibriumRelTol.
[[nodiscard]] ThPerS supply_after_electricity_shock(const MarketState& old, const MinerUnit& unit,
                                                    UsdPerKwh new_price);

}  // namespace btcecon
