#include "btcecon/scenario.hpp"

#include "btcecon/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace btcecon {

namespace {

using nlohmann::json;

// Binds each allowed key of one JSON object to a setter.
class ObjectReader {
public:
    explicit ObjectReader(std::string path) : path_(std::move(path)) {}

    ObjectReader& number(const std::string& key, std::optional<double>& dst) {
        fields_[key] = [this, key, &dst](const json& v) {
            if (!v.is_number()) fail(key, "a number");
            dst = v.get<double>();
        };
        return *this;
    }

    ObjectReader& integer(const std::string& key, std::optional<long long>& dst) {
        fields_[key] = [this, key, &dst](const json& v) {
            if (!v.is_number_integer()) fail(key, "an integer");
            dst = v.get<long long>();
        };
        return *this;
    }

    ObjectReader& string(const std::string& key, std::optional<std::string>& dst) {
        fields_[key] = [this, key, &dst](const json& v) {
            if (!v.is_string()) fail(key, "a string");
            dst = v.get<std::string>();
        };
        return *this;
    }

    ObjectReader& object(const std::string& key, std::function<void(const json&, const std::string&)> read) {
        fields_[key] = [this, key, read = std::move(read)](const json& v) {
            if (!v.is_object()) fail(key, "an object");
            read(v, qualified(key));
        };
        return *this;
    }

    void read(const json& obj) const {
        for (const auto& [key, value] : obj.items()) {
            const auto it = fields_.find(key);
            if (it == fields_.end()) throw ValidationError("unknown configuration key '" + qualified(key) + "'");
            it->second(value);
        }
    }

private:
    [[noreturn]] void fail(const std::string& key, const char* expected) const {
        throw ValidationError("configuration key '" + qualified(key) + "' must be " + expected);
    }

    [[nodiscard]] std::string qualified(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    std::string path_;
    std::map<std::string, std::function<void(const json&)>> fields_;
};

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed scenario JSON: ") + e.what());
    }
    if (!root.is_object()) throw ValidationError("scenario JSON must be an object");

    ScenarioConfig cfg;
    ObjectReader top("");
    top.object("miner",
               [&](const json& v, const std::string& p) {
                   ObjectReader(p)
                       .number("power_kw", cfg.miner.power_kw)
                       .number("electricity_usd_per_kwh", cfg.miner.electricity_usd_per_kwh)
                       .number("unit_hashrate_th_per_s", cfg.miner.unit_hashrate_th_per_s)
                       .read(v);
               })
        .object("market",
                [&](const json& v, const std::string& p) {
                    ObjectReader(p)
                        .number("exchange_rate_usd_per_btc", cfg.market.exchange_rate_usd_per_btc)
                        .number("fees_usd_per_day", cfg.market.fees_usd_per_day)
                        .number("block_reward_btc_per_day", cfg.market.block_reward_btc_per_day)
                        .number("hashrate_th_per_s", cfg.market.hashrate_th_per_s)
                        .read(v);
                })
        .object("oligopoly",
                [&](const json& v, const std::string& p) {
                    ObjectReader(p)
                        .integer("n", cfg.oligopoly.n)
                        .number("start_hashrate_th_per_s", cfg.oligopoly.start_hashrate_th_per_s)
                        .integer("max_iters", cfg.oligopoly.max_iters)
                        .read(v);
                })
        .object("issuance",
                [&](const json& v, const std::string& p) {
                    auto& is = cfg.issuance;
                    ObjectReader(p)
                        .number("initial_subsidy_btc_per_block", is.initial_subsidy_btc_per_block)
                        .integer("halving_interval_years", is.halving_interval_years)
                        .integer("halving_interval_blocks", is.halving_interval_blocks)
                        .integer("blocks_per_day", is.blocks_per_day)
                        .string("genesis_date", is.genesis_date)
                        .string("clock", is.clock)
                        .string("start_date", is.start_date)
                        .number("horizon_years", is.horizon_years)
                        .string("exchange_rate_table", is.exchange_rate_table)
                        .string("fees_table", is.fees_table)
                        .read(v);
                })
        .object("demand",
                [&](const json& v, const std::string& p) {
                    ObjectReader(p)
                        .number("scale", cfg.demand.scale)
                        .number("elasticity", cfg.demand.elasticity)
                        .number("mean_tx_value_usd", cfg.demand.mean_tx_value_usd)
                        .string("table", cfg.demand.table)
                        .read(v);
                })
        .object("capacity",
                [&](const json& v, const std::string& p) {
                    ObjectReader(p)
                        .integer("blocks_per_day", cfg.capacity.blocks_per_day)
                        .number("block_size_bytes", cfg.capacity.block_size_bytes)
                        .number("avg_tx_size_bytes", cfg.capacity.avg_tx_size_bytes)
                        .read(v);
                })
        .object("columns",
                [&](const json& v, const std::string& p) {
                    auto& c = cfg.columns;
                    ObjectReader(p)
                        .string("date", c.date)
                        .string("price_usd", c.price_usd)
                        .string("fees_usd_per_day", c.fees_usd_per_day)
                        .string("median_fee_usd", c.median_fee_usd)
                        .string("block_reward_btc_per_day", c.block_reward_btc_per_day)
                        .string("hashrate_th_per_s", c.hashrate_th_per_s)
                        .read(v);
                })
        .object("analysis",
                [&](const json& v, const std::string& p) {
                    ObjectReader(p)
                        .integer("fee_window_days", cfg.analysis.fee_window_days)
                        .integer("correlation_window_days", cfg.analysis.correlation_window_days)
                        .string("correlation_mode", cfg.analysis.correlation_mode)
                        .read(v);
                })
        .number("reliability_floor_th_per_s", cfg.reliability_floor_th_per_s)
        .string("data_file", cfg.data_file)
        .string("data_file_b", cfg.data_file_b)
        .string("output_dir", cfg.output_dir)
        .read(root);
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    ScenarioConfig cfg = parse_scenario(text.str());
    cfg.base_dir = path.parent_path();
    return cfg;
}

std::filesystem::path ScenarioConfig::resolve(const std::string& file) const {
    const std::filesystem::path p(file);
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
}

}  // namespace btcecon
