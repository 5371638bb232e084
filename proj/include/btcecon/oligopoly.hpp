#pragma once

// n-firm mining competition. Firms hold shares k_i of network hashrate and
// split the revenue bundle R = F + X*BR in proportion to them.

#include "btcecon/core_model.hpp"
#include "btcecon/units.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace btcecon {

class OligopolyConfig {
public:
    /// Shares must each lie in [0, 1] and sum to 1 within 1e-12.
    OligopolyConfig(std::vector<double> shares, UsdPerDay revenue, MinerUnit unit);

    /// n firms with equal shares 1/n.
    static OligopolyConfig symmetric(std::size_t n, UsdPerDay revenue, MinerUnit unit);

    [[nodiscard]] std::size_t firms() const { return shares_.size(); }
    [[nodiscard]] const std::vector<double>& shares() const { return shares_; }
    [[nodiscard]] UsdPerDay revenue() const { return revenue_; }
    [[nodiscard]] const MinerUnit& unit() const { return unit_; }

private:
    std::vector<double> shares_;
    UsdPerDay revenue_;
    MinerUnit unit_;
};

struct FirmOutcome {
    std::size_t firm = 0;
    UsdPerDay profit;
    double share = 0.0;
    ThPerS hashrate;
};

/// P_i = k_i * (R - 24 theta p H / unit_hashrate). H may be zero.
[[nodiscard]] UsdPerDay firm_profit(const OligopolyConfig& cfg, ThPerS network_hashrate, std::size_t firm);

/// firm_profit for every firm, with the hashrate each contributes (k_i * H).
[[nodiscard]] std::vector<FirmOutcome> firm_outcomes(const OligopolyConfig& cfg, ThPerS network_hashrate);

/// Change in every firm's daily profit when `adder` installs one more rig:
///   adder:  u (1 - k) R / (H + u) - 24 theta p
///   others: -u k_i R / (H + u)
[[nodiscard]] std::vector<UsdPerDay> marginal_delta_adding_unit(const OligopolyConfig& cfg, ThPerS network_hashrate,
                                                                std::size_t adder);

struct SymmetricEquilibrium {
    ThPerS hashrate;             ///< H* = u (1 - 1/n) R / (24 theta p)
    UsdPerDay per_firm_profit;   ///< R / n^2
};

/// Zero-marginal-profit point for n equal firms, using the large-H form
/// (denominator H rather than H + u). Throws ValidationError if n == 0,
/// R < 0 or theta*p == 0.
[[nodiscard]] SymmetricEquilibrium symmetric_equilibrium(std::size_t n, UsdPerDay revenue, const MinerUnit& unit);

enum class TraceMode {
    full,        ///< one row per rig added
    compressed,  ///< stretches of whole rounds where every firm adds are collapsed into one row
};

struct DynamicsStep {
    std::uint64_t iteration = 0;      ///< turns taken so far, including this one
    std::optional<std::size_t> firm;  ///< empty for a collapsed stretch of rounds
    ThPerS hashrate;                  ///< network hashrate after the step
    UsdPerDay delta;                  ///< adder's profit delta that triggered the step
    std::uint64_t units = 1;          ///< rigs added by this row
};

struct DynamicsResult {
    ThPerS hashrate;
    std::vector<double> shares;
    std::vector<std::uint64_t> units_added;  ///< per firm
    std::uint64_t iterations = 0;            ///< turns evaluated, including the final idle pass
    std::vector<DynamicsStep> trace;
};

/// Round-robin best response: on its turn a firm adds one rig iff its
/// adding delta is strictly positive. Stops after a full pass in which no
/// firm adds. Firms start with equal hashrate start/n; at zero network
/// hashrate shares are taken as 1/n.
///
/// Compressed mode skips ahead over rounds in which every firm adds; the
/// end state is identical to full mode.
///
/// Throws ComputationError when more than max_iters turns would be needed.
[[nodiscard]] DynamicsResult best_response_dynamics(std::size_t n, UsdPerDay revenue, const MinerUnit& unit,
                                                    ThPerS start, std::uint64_t max_iters,
                                                    TraceMode mode = TraceMode::compressed);

}  // namespace btcecon
