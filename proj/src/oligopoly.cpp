#include "btcecon/oligopoly.hpp"

#include "btcecon/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace btcecon {

namespace {

constexpr double kShareSumTol = 1e-12;

void check_index(std::size_t i, std::size_t n) {
    if (i >= n)
        throw ValidationError("firm index " + std::to_string(i) + " out of range for " + std::to_string(n) +
                              " firms");
}

void check_hashrate(ThPerS h) {
    if (!std::isfinite(h.value()) || h.value() < 0.0)
        throw ValidationError("hashrate_th_per_s must be finite and non-negative");
}

// Profit change for a firm with share k adding one rig at network hashrate H.
UsdPerDay adder_delta(double k, double network, UsdPerDay revenue, const MinerUnit& unit) {
    const double u = unit.hashrate().value();
    return UsdPerDay(u * (1.0 - k) * revenue.value() / (network + u)) - daily_energy_cost(unit);
}

// Dynamics state: every firm starts at base = start/n and then owns a whole
// number of rigs. Hashrates are always recomputed from integer counts so the
// naive and skip-ahead paths see bit-identical inputs.
struct Ledger {
    std::size_t n;
    double start;
    double unit;
    std::vector<std::uint64_t> rigs;
    std::uint64_t total = 0;

    [[nodiscard]] double base() const { return start / static_cast<double>(n); }
    [[nodiscard]] double network() const { return network_with(total); }
    [[nodiscard]] double network_with(std::uint64_t t) const { return start + static_cast<double>(t) * unit; }
    [[nodiscard]] double firm_hashrate(std::uint64_t r) const { return base() + static_cast<double>(r) * unit; }

    [[nodiscard]] double share(std::uint64_t r, std::uint64_t t) const {
        const double h = network_with(t);
        return h > 0.0 ? firm_hashrate(r) / h : 1.0 / static_cast<double>(n);
    }
};

}  // namespace

OligopolyConfig::OligopolyConfig(std::vector<double> shares, UsdPerDay revenue, MinerUnit unit)
    : shares_(std::move(shares)), revenue_(revenue), unit_(unit) {
    if (shares_.empty()) throw ValidationError("oligopoly needs at least one firm");
    for (std::size_t i = 0; i < shares_.size(); ++i) {
        const double k = shares_[i];
        if (!(k >= 0.0 && k <= 1.0))
            throw ValidationError("share k_" + std::to_string(i) + " must lie in [0, 1]");
    }
    const double sum = std::accumulate(shares_.begin(), shares_.end(), 0.0);
    if (std::abs(sum - 1.0) > kShareSumTol)
        throw ValidationError("shares must sum to 1, got " + std::to_string(sum));
    if (!std::isfinite(revenue.value()) || revenue.value() < 0.0)
        throw ValidationError("revenue_usd_per_day must be finite and non-negative");
}

OligopolyConfig OligopolyConfig::symmetric(std::size_t n, UsdPerDay revenue, MinerUnit unit) {
    if (n == 0) throw ValidationError("oligopoly needs at least one firm");
    return OligopolyConfig(std::vector<double>(n, 1.0 / static_cast<double>(n)), revenue, unit);
}

UsdPerDay firm_profit(const OligopolyConfig& cfg, ThPerS network_hashrate, std::size_t firm) {
    check_index(firm, cfg.firms());
    check_hashrate(network_hashrate);
    const MinerUnit& unit = cfg.unit();
    const UsdPerDay cost = daily_energy_cost(unit) * (network_hashrate / unit.hashrate());
    return (cfg.revenue() - cost) * cfg.shares()[firm];
}

std::vector<FirmOutcome> firm_outcomes(const OligopolyConfig& cfg, ThPerS network_hashrate) {
    std::vector<FirmOutcome> out;
    out.reserve(cfg.firms());
    for (std::size_t i = 0; i < cfg.firms(); ++i) {
        const double k = cfg.shares()[i];
        out.push_back({i, firm_profit(cfg, network_hashrate, i), k, network_hashrate * k});
    }
    return out;
}

std::vector<UsdPerDay> marginal_delta_adding_unit(const OligopolyConfig& cfg, ThPerS network_hashrate,
                                                  std::size_t adder) {
    check_index(adder, cfg.firms());
    check_hashrate(network_hashrate);
    const double h = network_hashrate.value();
    const double u = cfg.unit().hashrate().value();
    std::vector<UsdPerDay> deltas;
    deltas.reserve(cfg.firms());
    for (std::size_t i = 0; i < cfg.firms(); ++i) {
        const double k = cfg.shares()[i];
        if (i == adder)
            deltas.push_back(adder_delta(k, h, cfg.revenue(), cfg.unit()));
        else
            deltas.push_back(UsdPerDay(-u * k * cfg.revenue().value() / (h + u)));
    }
    return deltas;
}

SymmetricEquilibrium symmetric_equilibrium(std::size_t n, UsdPerDay revenue, const MinerUnit& unit) {
    if (n == 0) throw ValidationError("oligopoly needs at least one firm");
    if (!std::isfinite(revenue.value()) || revenue.value() < 0.0)
        throw ValidationError("revenue_usd_per_day must be finite and non-negative");
    const UsdPerDay cost = daily_energy_cost(unit);
    if (cost.value() == 0.0)
        throw ValidationError("electricity_usd_per_kwh is zero: oligopoly equilibrium is unbounded");
    const double nn = static_cast<double>(n);
    const ThPerS h = unit.hashrate() * ((1.0 - 1.0 / nn) * (revenue / cost));
    return {h, revenue / (nn * nn)};
}

DynamicsResult best_response_dynamics(std::size_t n, UsdPerDay revenue, const MinerUnit& unit, ThPerS start,
                                      std::uint64_t max_iters, TraceMode mode) {
    if (n == 0) throw ValidationError("oligopoly needs at least one firm");
    if (!std::isfinite(revenue.value()) || revenue.value() < 0.0)
        throw ValidationError("revenue_usd_per_day must be finite and non-negative");
    check_hashrate(start);

    Ledger ledger{n, start.value(), unit.hashrate().value(), std::vector<std::uint64_t>(n, 0)};
    DynamicsResult result;
    std::uint64_t turn = 0;

    auto delta_for = [&](std::uint64_t own_rigs, std::uint64_t total) {
        return adder_delta(ledger.share(own_rigs, total), ledger.network_with(total), revenue, unit);
    };

    // Does a round that starts with every firm holding `rounds` rigs end with
    // every firm having added? Firm j moves after j others already added.
    auto round_fills = [&](std::uint64_t rounds) {
        for (std::size_t j = 0; j < n; ++j)
            if (!(delta_for(rounds, rounds * n + j).value() > 0.0)) return false;
        return true;
    };

    if (mode == TraceMode::compressed && round_fills(0)) {
        // The adder delta falls monotonically with the round index, so the
        // last filled round can be bracketed and bisected.
        std::uint64_t lo = 0;
        std::uint64_t hi = 1;
        while (round_fills(hi)) {
            lo = hi;
            hi *= 2;
        }
        while (hi - lo > 1) {
            const std::uint64_t mid = lo + (hi - lo) / 2;
            (round_fills(mid) ? lo : hi) = mid;
        }
        // Leave the last filled round to the step-by-step loop.
        const std::uint64_t skip = lo;
        if (skip > 0) {
            if (skip > max_iters / n)
                throw ComputationError("best-response dynamics exceeded " + std::to_string(max_iters) + " turns");
            for (auto& r : ledger.rigs) r = skip;
            ledger.total = skip * n;
            turn = skip * n;
            result.trace.push_back({turn, std::nullopt, ThPerS(ledger.network()),
                                    delta_for(skip - 1, skip * n - 1), skip * n});
        }
    }

    std::size_t idle = 0;
    while (idle < n) {
        if (turn >= max_iters)
            throw ComputationError("best-response dynamics exceeded " + std::to_string(max_iters) + " turns");
        const std::size_t firm = static_cast<std::size_t>(turn % n);
        ++turn;
        const UsdPerDay delta = delta_for(ledger.rigs[firm], ledger.total);
        if (delta.value() > 0.0) {
            ++ledger.rigs[firm];
            ++ledger.total;
            idle = 0;
            result.trace.push_back({turn, firm, ThPerS(ledger.network()), delta, 1});
        } else {
            ++idle;
        }
    }

    result.hashrate = ThPerS(ledger.network());
    result.units_added = ledger.rigs;
    result.iterations = turn;
    result.shares.reserve(n);
    for (std::size_t i = 0; i < n; ++i) result.shares.push_back(ledger.share(ledger.rigs[i], ledger.total));
    return result;
}

}  // namespace btcecon
