#include "btcecon/core_model.hpp"

#include "btcecon/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace btcecon {

namespace {

void require_non_negative(double v, const char* field) {
    if (!std::isfinite(v) || v < 0.0)
        throw ValidationError(std::string(field) + " must be a finite non-negative number, got " +
                              std::to_string(v));
}

void require_positive(double v, const char* field) {
    if (!std::isfinite(v) || v <= 0.0)
        throw ValidationError(std::string(field) + " must be a finite positive number, got " +
                              std::to_string(v));
}

}  // namespace

MarketState::MarketState(UsdPerBtc exchange_rate, UsdPerDay fees, BtcPerDay block_reward, ThPerS hashrate)
    : exchange_rate_(exchange_rate), fees_(fees), block_reward_(block_reward), hashrate_(hashrate) {
    require_non_negative(exchange_rate.value(), "exchange_rate_usd_per_btc");
    require_non_negative(fees.value(), "fees_usd_per_day");
    require_non_negative(block_reward.value(), "block_reward_btc_per_day");
    require_non_negative(hashrate.value(), "hashrate_th_per_s");
}

MinerUnit::MinerUnit(Kilowatts power, UsdPerKwh electricity, ThPerS hashrate)
    : power_(power), electricity_(electricity), hashrate_(hashrate) {
    require_positive(power.value(), "power_kw");
    require_non_negative(electricity.value(), "electricity_usd_per_kwh");
    require_positive(hashrate.value(), "unit_hashrate_th_per_s");
}

UsdPerDay revenue_bundle(UsdPerDay fees, UsdPerBtc exchange_rate, BtcPerDay block_reward) {
    return fees + UsdPerDay(exchange_rate.value() * block_reward.value());
}

UsdPerDay revenue_bundle(const MarketState& state) {
    return revenue_bundle(state.fees(), state.exchange_rate(), state.block_reward());
}

UsdPerDay daily_energy_cost(const MinerUnit& unit) {
    return UsdPerDay(kHoursPerDay * unit.power().value() * unit.electricity().value());
}

UsdPerDay marginal_revenue(UsdPerDay revenue, ThPerS network_hashrate, const MinerUnit& unit) {
    if (!(network_hashrate.value() > 0.0))
        throw ValidationError("hashrate_th_per_s must be positive to compute a revenue share");
    return revenue * (unit.hashrate() / network_hashrate);
}

UsdPerDay marginal_revenue(const MarketState& state, const MinerUnit& unit) {
    return marginal_revenue(revenue_bundle(state), state.hashrate(), unit);
}

UsdPerDay marginal_profit(UsdPerDay revenue, ThPerS network_hashrate, const MinerUnit& unit) {
    return marginal_revenue(revenue, network_hashrate, unit) - daily_energy_cost(unit);
}

UsdPerDay marginal_profit(const MarketState& state, const MinerUnit& unit) {
    return marginal_profit(revenue_bundle(state), state.hashrate(), unit);
}

ThPerS competitive_equilibrium_hashrate(UsdPerDay revenue, const MinerUnit& unit) {
    require_non_negative(revenue.value(), "revenue_usd_per_day");
    if (revenue.value() == 0.0) return ThPerS(0.0);
    const UsdPerDay cost = daily_energy_cost(unit);
    if (cost.value() == 0.0)
        throw ValidationError("electricity_usd_per_kwh is zero: hashrate supply is unbounded for positive revenue");
    return unit.hashrate() * (revenue / cost);
}

ThPerS supply_after_electricity_shock(const MarketState& old, const MinerUnit& unit, UsdPerKwh new_price) {
    require_positive(new_price.value(), "new electricity_usd_per_kwh");
    const ThPerS expected = competitive_equilibrium_hashrate(revenue_bundle(old), unit);
    const double h = old.hashrate().value();
    const double scale = std::max(std::abs(h), std::abs(expected.value()));
    if (std::abs(h - expected.value()) > kEquilibriumRelTol * scale)
        throw ValidationError("market state is not at competitive equilibrium: hashrate_th_per_s=" +
                              std::to_string(h) + ", equilibrium=" + std::to_string(expected.value()));
    return old.hashrate() * (unit.electricity().value() / new_price.value());
}

}  // namespace btcecon
