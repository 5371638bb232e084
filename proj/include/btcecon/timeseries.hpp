#pragma once

// Daily market series: CSV ingestion and the empirical analyses built on
// top of it (miner profitability, smoothed fees, log-return correlation).

#include "btcecon/core_model.hpp"
#include "btcecon/date.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace btcecon {

struct DailyRecord {
    Date date;
    double price_usd = 0.0;                           ///< X
    std::optional<double> fees_usd_per_day;           ///< F
    std::optional<double> median_fee_usd;
    std::optional<double> block_reward_btc_per_day;   ///< BR
    std::optional<double> hashrate_th_per_s;          ///< H

    bool operator==(const DailyRecord&) const = default;
};

struct Series {
    std::string label;
    std::vector<DailyRecord> records;  ///< strictly increasing dates

    /// Number of consecutive record pairs more than one day apart.
    [[nodiscard]] std::size_t gaps() const;
};

/// Header names for each field. Optional fields whose column is missing from
/// the file are absent on every row.
struct ColumnMapping {
    std::string date = "date";
    std::string price_usd = "price_usd";
    std::string fees_usd_per_day = "fees_usd_per_day";
    std::string median_fee_usd = "median_fee_usd";
    std::string block_reward_btc_per_day = "block_reward_btc_per_day";
    std::string hashrate_th_per_s = "hashrate_th_per_s";
};

struct LoadedSeries {
    Series series;
    std::size_t out_of_order = 0;  ///< rows that had to be moved by sorting
};

/// Reads a header-first, comma-separated, dot-decimal file. Empty cells in
/// optional columns mean "absent". Rows that fail numeric parsing (or hold
/// negative values) are collected and reported together by row number.
/// Throws ValidationError for a missing required column, an unparseable
/// date, a duplicate date or bad rows.
[[nodiscard]] LoadedSeries load_csv(const std::filesystem::path& path, const ColumnMapping& mapping = {});
[[nodiscard]] LoadedSeries parse_csv(std::istream& in, const std::string& label, const ColumnMapping& mapping = {});

/// Writes every field under the default column names; absent values are
/// empty cells. Full double precision.
void write_csv(std::ostream& out, const Series& s);

struct DatedValue {
    Date date;
    double value = 0.0;
};

struct DatedOptional {
    Date date;
    std::optional<double> value;
};

struct ProfitabilitySeries {
    std::vector<DatedValue> points;
    std::size_t skipped = 0;  ///< rows lacking X, F, BR or a positive H
};

/// Marginal profit of `unit` for each row that carries X, F, BR and H > 0.
/// Throws ValidationError when no row is usable.
[[nodiscard]] ProfitabilitySeries profitability_series(const Series& s, const MinerUnit& unit);

/// Rows carrying a median fee, in date order.
[[nodiscard]] std::vector<DatedValue> median_fee_series(const Series& s);

/// Trailing mean over the last `window` observations. The first window-1
/// outputs are absent; if window exceeds the input length every output is
/// absent. Throws ValidationError for window == 0.
[[nodiscard]] std::vector<DatedOptional> rolling_mean(const std::vector<DatedValue>& values, std::size_t window);

struct LogReturns {
    std::vector<DatedValue> returns;  ///< dated by the later day
    std::size_t gaps_excluded = 0;
};

/// ln X_t - ln X_{t-1} for consecutive calendar days only.
/// Throws ValidationError on a non-positive price.
[[nodiscard]] LogReturns log_returns(const Series& s);

enum class WindowMode { non_overlapping, sliding };

struct CorrelationWindow {
    Date start;
    Date end;
    std::size_t pairs = 0;
    std::optional<double> rho;
    std::string reason;  ///< why rho is absent
};

inline constexpr std::size_t kMinCorrelationPairs = 3;

/// Pearson correlation of aligned daily log returns in windows of
/// `window_days` calendar days. Series are inner-joined on date first, and
/// returns never straddle a day missing from either series.
/// Non-overlapping windows start at the first aligned return; sliding
/// windows end at each aligned return date once a full window fits.
/// Throws ValidationError if the series share no dates or window_days == 0.
[[nodiscard]] std::vector<CorrelationWindow> windowed_correlation(const Series& a, const Series& b,
                                                                  std::size_t window_days = 100,
                                                                  WindowMode mode = WindowMode::non_overlapping);

/// Sample Pearson correlation; empty when either input has zero variance or
/// fewer than two points.
[[nodiscard]] std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Header `date,value`; absent values are empty cells.
void write_dated_csv(std::ostream& out, const std::vector<DatedValue>& rows);
void write_dated_csv(std::ostream& out, const std::vector<DatedOptional>& rows);

}  // namespace btcecon
