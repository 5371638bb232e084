#pragma once

// Fee-only network economics. Fees are a fraction gamma of transaction
// value, demand N(gamma) falls with gamma and is capped by block capacity,
// and revenue F = gamma * V * N(gamma). Nothing here takes the exchange rate
// as input: the fee equilibrium does not depend on it.

#include "btcecon/core_model.hpp"
#include "btcecon/units.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace btcecon {

/// Constant-elasticity demand N(gamma) = scale * gamma^(-elasticity).
class DemandCurve {
public:
    /// Requires scale > 0, elasticity > 0, mean transaction value > 0.
    DemandCurve(double scale, double elasticity, double mean_tx_value_usd);

    [[nodiscard]] double scale() const { return scale_; }
    [[nodiscard]] double elasticity() const { return elasticity_; }
    [[nodiscard]] double mean_tx_value_usd() const { return mean_tx_value_usd_; }
    [[nodiscard]] bool elastic() const { return elasticity_ > 1.0; }

    /// Uncapped transactions/day.
    [[nodiscard]] double raw(double gamma) const;

private:
    double scale_;
    double elasticity_;
    double mean_tx_value_usd_;
};

/// Block-space limit on transactions per day.
class CapacityParams {
public:
    CapacityParams() = default;
    /// Throws ValidationError unless the derived N_max is positive.
    CapacityParams(int blocks_per_day, double block_size_bytes, double avg_tx_size_bytes);

    [[nodiscard]] int blocks_per_day() const { return blocks_per_day_; }
    [[nodiscard]] double block_size_bytes() const { return block_size_bytes_; }
    [[nodiscard]] double avg_tx_size_bytes() const { return avg_tx_size_bytes_; }
    /// floor(blocks_per_day * block_size / avg_tx_size)
    [[nodiscard]] double max_transactions() const { return max_tx_; }

private:
    int blocks_per_day_ = 144;
    double block_size_bytes_ = 1'000'000.0;
    double avg_tx_size_bytes_ = 250.0;
    double max_tx_ = 576'000.0;
};

struct ReliabilityFloor {
    ThPerS critical_hashrate;
};

/// min(scale * gamma^-eps, N_max). Throws ValidationError for gamma <= 0.
[[nodiscard]] double demand(double gamma, const DemandCurve& curve, const CapacityParams& cap);

/// gamma * V * N(gamma).
[[nodiscard]] UsdPerDay fee_revenue(double gamma, const DemandCurve& curve, const CapacityParams& cap);

struct FeeOptimum {
    double gamma_min = 0.0;  ///< rate at which demand exactly fills capacity
    UsdPerDay max_revenue;   ///< gamma_min * V * N_max
};

/// Revenue-maximizing fee rate: gamma_min = (scale / N_max)^(1/eps).
/// Throws ValidationError if the curve is not elastic (eps <= 1).
[[nodiscard]] FeeOptimum optimal_fee_rate(const DemandCurve& curve, const CapacityParams& cap);

struct FeeEquilibrium {
    double gamma_min = 0.0;
    UsdPerDay max_revenue;
    ThPerS hashrate;
    bool secure = false;  ///< hashrate >= critical hashrate
};

/// Network living on fees alone: the optimum fee revenue is the whole
/// revenue bundle and the competitive supply condition fixes hashrate.
[[nodiscard]] FeeEquilibrium fee_only_equilibrium(const DemandCurve& curve, const CapacityParams& cap,
                                                  const MinerUnit& unit, const ReliabilityFloor& floor);

/// Demand given as a table, interpolated linearly in (log gamma, log N).
class TabulatedDemand {
public:
    /// Points need strictly increasing gamma and strictly decreasing,
    /// positive transaction counts.
    TabulatedDemand(std::vector<std::pair<double, double>> points, double mean_tx_value_usd);

    /// CSV with header `gamma,transactions_per_day`.
    static TabulatedDemand load_csv(const std::filesystem::path& path, double mean_tx_value_usd);
    static TabulatedDemand parse_csv(std::istream& in, double mean_tx_value_usd, const std::string& source);

    [[nodiscard]] const std::vector<std::pair<double, double>>& points() const { return points_; }
    [[nodiscard]] double mean_tx_value_usd() const { return mean_tx_value_usd_; }
    [[nodiscard]] double min_gamma() const { return points_.front().first; }
    [[nodiscard]] double max_gamma() const { return points_.back().first; }

    /// Uncapped demand; throws ValidationError outside [min_gamma, max_gamma].
    [[nodiscard]] double raw(double gamma) const;

private:
    std::vector<std::pair<double, double>> points_;
    double mean_tx_value_usd_;
};

[[nodiscard]] double demand(double gamma, const TabulatedDemand& curve, const CapacityParams& cap);
[[nodiscard]] UsdPerDay fee_revenue(double gamma, const TabulatedDemand& curve, const CapacityParams& cap);

/// Grid search for the revenue argmax over the table's gamma range:
/// `grid_points` log-spaced rates plus every knot and every capacity
/// crossing.
[[nodiscard]] FeeOptimum optimal_fee_rate(const TabulatedDemand& curve, const CapacityParams& cap,
                                          std::size_t grid_points = 100'000);

[[nodiscard]] FeeEquilibrium fee_only_equilibrium(const TabulatedDemand& curve, const CapacityParams& cap,
                                                  const MinerUnit& unit, const ReliabilityFloor& floor);

}  // namespace btcecon
