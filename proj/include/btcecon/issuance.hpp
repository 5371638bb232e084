#pragma once

// Block subsidy halving schedule and daily revenue projections.

#include "btcecon/date.hpp"
#include "btcecon/units.hpp"

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

namespace btcecon {

enum class EpochClock {
    calendar,      ///< halving every `halving_interval_years` calendar years after genesis
    block_height,  ///< halving every `halving_interval_blocks` blocks at `blocks_per_day`
};

struct IssuanceParams {
    double initial_subsidy_btc_per_block = 50.0;
    int halving_interval_years = 4;
    long long halving_interval_blocks = 210'000;
    int blocks_per_day = 144;
    Date genesis = Date(std::chrono::year(2009) / 1 / 3);
    EpochClock clock = EpochClock::calendar;

    /// All fields positive, and blocks_per_day * 365.25 * years within 5% of
    /// halving_interval_blocks. Throws ValidationError.
    void validate() const;
};

struct Epoch {
    int index = 0;
    double subsidy_btc_per_block = 0.0;
    BtcPerDay daily_reward;
};

/// Epoch e: subsidy = initial / 2^e, BR = blocks_per_day * subsidy.
[[nodiscard]] Epoch epoch_at(int index, const IssuanceParams& params);

/// Epoch in force on `date`. A halving date belongs to the new epoch.
/// Throws ValidationError for dates before genesis.
[[nodiscard]] Epoch epoch_of(Date date, const IssuanceParams& params);

/// BR(later) / BR(earlier) = 2^(earlier - later). Throws ValidationError if
/// `later` precedes `earlier`.
[[nodiscard]] double reward_ratio(const Epoch& earlier, const Epoch& later);

template <class Q>
using Path = std::function<Q(Date)>;

template <class Q>
Path<Q> constant_path(Q value) {
    return [value](Date) { return value; };
}

/// value(d) = at_anchor + slope_per_day * (d - anchor)
template <class Q>
Path<Q> linear_path(Date anchor, Q at_anchor, double slope_per_day) {
    return [=](Date d) {
        const auto days = static_cast<double>((d - anchor).count());
        return Q(at_anchor.value() + slope_per_day * days);
    };
}

/// Linear interpolation between dated points (sorted, unique dates).
/// Evaluating outside the table's range throws ValidationError.
Path<UsdPerBtc> table_path_usd_per_btc(std::vector<std::pair<Date, double>> points);
Path<UsdPerDay> table_path_usd_per_day(std::vector<std::pair<Date, double>> points);

struct ProjectionRow {
    Date date;
    UsdPerDay block_reward_usd;
    UsdPerDay fees_usd;
    double fee_share = 0.0;  ///< F / (F + X*BR); 0 when both are zero
};

/// One row per day from `start` through start + horizon_years inclusive.
/// Whole years advance on the calendar, the fractional part as 365.25-day
/// years. Path failures (exceptions, negative or non-finite values) raise
/// ComputationError naming the date.
[[nodiscard]] std::vector<ProjectionRow> revenue_projection(Date start, double horizon_years,
                                                            const Path<UsdPerBtc>& exchange_rate,
                                                            const Path<UsdPerDay>& fees,
                                                            const IssuanceParams& params);

/// Header `date,block_reward_usd,fees_usd,fee_share`, full precision.
void write_projection_csv(std::ostream& out, const std::vector<ProjectionRow>& rows);

}  // namespace btcecon
