#pragma once

// JSON scenario configuration consumed by the command-line tool. Every field
// is optional; command-line flags take precedence over the file, and the file
// over built-in defaults. Unknown keys are rejected.

#include <filesystem>
#include <optional>
#include <string>

namespace btcecon {

struct MinerConfig {
    std::optional<double> power_kw;
    std::optional<double> electricity_usd_per_kwh;
    std::optional<double> unit_hashrate_th_per_s;
};

struct MarketConfig {
    std::optional<double> exchange_rate_usd_per_btc;
    std::optional<double> fees_usd_per_day;
    std::optional<double> block_reward_btc_per_day;
    std::optional<double> hashrate_th_per_s;
};

struct OligopolyScenario {
    std::optional<long long> n;
    std::optional<double> start_hashrate_th_per_s;
    std::optional<long long> max_iters;
};

struct IssuanceScenario {
    std::optional<double> initial_subsidy_btc_per_block;
    std::optional<long long> halving_interval_years;
    std::optional<long long> halving_interval_blocks;
    std::optional<long long> blocks_per_day;
    std::optional<std::string> genesis_date;
    std::optional<std::string> clock;  ///< "calendar" | "block-height"
    std::optional<std::string> start_date;
    std::optional<double> horizon_years;
    std::optional<std::string> exchange_rate_table;  ///< CSV `date,value`
    std::optional<std::string> fees_table;           ///< CSV `date,value`
};

struct DemandConfig {
    std::optional<double> scale;
    std::optional<double> elasticity;
    std::optional<double> mean_tx_value_usd;
    std::optional<std::string> table;  ///< CSV `gamma,transactions_per_day`
};

struct CapacityConfig {
    std::optional<long long> blocks_per_day;
    std::optional<double> block_size_bytes;
    std::optional<double> avg_tx_size_bytes;
};

struct ColumnsConfig {
    std::optional<std::string> date;
    std::optional<std::string> price_usd;
    std::optional<std::string> fees_usd_per_day;
    std::optional<std::string> median_fee_usd;
    std::optional<std::string> block_reward_btc_per_day;
    std::optional<std::string> hashrate_th_per_s;
};

struct AnalysisConfig {
    std::optional<long long> fee_window_days;
    std::optional<long long> correlation_window_days;
    std::optional<std::string> correlation_mode;  ///< "non-overlapping" | "sliding"
};

struct ScenarioConfig {
    MinerConfig miner;
    MarketConfig market;
    OligopolyScenario oligopoly;
    IssuanceScenario issuance;
    DemandConfig demand;
    CapacityConfig capacity;
    std::optional<double> reliability_floor_th_per_s;
    std::optional<std::string> data_file;
    std::optional<std::string> data_file_b;
    ColumnsConfig columns;
    AnalysisConfig analysis;
    std::optional<std::string> output_dir;

    /// Relative file paths in the scenario resolve against this directory
    /// (the scenario file's own directory when loaded from disk).
    std::filesystem::path base_dir;

    [[nodiscard]] std::filesystem::path resolve(const std::string& file) const;
};

/// Throws ValidationError naming the offending key on unknown keys, wrong
/// JSON types or malformed JSON.
[[nodiscard]] ScenarioConfig parse_scenario(const std::string& json_text);
[[nodiscard]] ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace btcecon
