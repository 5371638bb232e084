#include "btcecon/cli.hpp"

#include "btcecon/core_model.hpp"
#include "btcecon/csv.hpp"
#include "btcecon/errors.hpp"
#include "btcecon/fee_market.hpp"
#include "btcecon/issuance.hpp"
#include "btcecon/oligopoly.hpp"
#include "btcecon/scenario.hpp"
#include "btcecon/timeseries.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#ifndef BTCECON_VERSION
#define BTCECON_VERSION "0.0.0"
#endif

namespace btcecon::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kDefaultPowerKw = 3.0;
constexpr double kDefaultElectricity = 0.15;
constexpr std::uint64_t kDefaultMaxIters = 1'000'000'000'000'000ULL;
constexpr long long kDefaultFeeWindow = 200;
constexpr long long kDefaultCorrelationWindow = 100;

std::string fmt6(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

// Two-column aligned table for stdout.
class Report {
public:
    void add(std::string label, std::string value, std::string unit = {}) {
        rows_.push_back({std::move(label), std::move(value), std::move(unit)});
    }
    void add(std::string label, double value, std::string unit = {}) {
        add(std::move(label), fmt6(value), std::move(unit));
    }

    void print(std::ostream& out) const {
        std::size_t lw = 0, vw = 0;
        for (const auto& r : rows_) {
            lw = std::max(lw, r[0].size());
            vw = std::max(vw, r[1].size());
        }
        for (const auto& r : rows_) {
            out << std::left << std::setw(static_cast<int>(lw)) << r[0] << "  " << std::right
                << std::setw(static_cast<int>(vw)) << r[1];
            if (!r[2].empty()) out << "  " << r[2];
            out << '\n';
        }
    }

private:
    std::vector<std::array<std::string, 3>> rows_;
};

// Multi-column aligned table for stdout.
void print_grid(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty()) return;
    std::vector<std::size_t> w(rows.front().size(), 0);
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out << "  ";
            out << std::right << std::setw(static_cast<int>(w[i])) << r[i];
        }
        out << '\n';
    }
}

struct Flags {
    std::string config;
    std::string out;

    std::optional<double> theta, p, unit_hashrate;
    std::optional<double> x, br, fees, h, revenue, new_p;

    std::optional<long long> n, adder, max_iters;
    std::optional<double> start_h;
    std::vector<double> shares;
    std::string trace = "compressed";

    std::optional<std::string> date, start, genesis, clock, x_table, fees_table;
    std::optional<double> years;

    std::optional<double> scale, elasticity, tx_value, gamma, block_size, tx_size, floor;
    std::optional<long long> blocks_per_day;
    std::optional<std::string> demand_table;

    std::optional<std::string> data, data_b, mode;
    std::optional<long long> window;
};

template <class T>
T pick(const std::optional<T>& flag, const std::optional<T>& conf, const std::optional<T>& fallback,
       std::string_view name) {
    if (flag) return *flag;
    if (conf) return *conf;
    if (fallback) return *fallback;
    throw ValidationError("missing required value '" + std::string(name) + "'");
}

std::size_t to_count(long long v, std::string_view name, long long min) {
    if (v < min) throw ValidationError(std::string(name) + " must be at least " + std::to_string(min));
    return static_cast<std::size_t>(v);
}

class Runner {
public:
    Runner(const Flags& f, ScenarioConfig cfg, std::ostream& out, std::ostream& err)
        : f_(f), cfg_(std::move(cfg)), out_(out), err_(err) {}

    int profit() {
        const MinerUnit unit = miner();
        const MarketState state = market(true);
        Report r;
        r.add("daily_energy_cost", daily_energy_cost(unit).value(), "USD/day");
        r.add("marginal_revenue", marginal_revenue(state, unit).value(), "USD/day");
        r.add("marginal_profit", marginal_profit(state, unit).value(), "USD/day");
        r.print(out_);
        write("profit.csv", [&](std::ostream& o) {
            o << "metric,value\n"
              << "daily_energy_cost," << csv::format_number(daily_energy_cost(unit).value()) << '\n'
              << "marginal_revenue," << csv::format_number(marginal_revenue(state, unit).value()) << '\n'
              << "marginal_profit," << csv::format_number(marginal_profit(state, unit).value()) << '\n';
        });
        return kExitOk;
    }

    int supply() {
        const MinerUnit unit = miner();
        const UsdPerDay rev = revenue();
        const ThPerS h = competitive_equilibrium_hashrate(rev, unit);
        Report r;
        r.add("revenue", rev.value(), "USD/day");
        r.add("equilibrium_hashrate", h.value(), "tH/s");
        std::optional<ThPerS> shocked;
        if (f_.new_p) {
            const ThPerS current(pick(f_.h, cfg_.market.hashrate_th_per_s, std::optional<double>(h.value()),
                                      "hashrate_th_per_s"));
            const MarketState old(UsdPerBtc(0.0), rev, BtcPerDay(0.0), current);
            shocked = supply_after_electricity_shock(old, unit, UsdPerKwh(*f_.new_p));
            r.add("new_electricity", *f_.new_p, "USD/kWh");
            r.add("shocked_hashrate", shocked->value(), "tH/s");
        }
        r.print(out_);
        write("supply.csv", [&](std::ostream& o) {
            o << "metric,value\n"
              << "revenue," << csv::format_number(rev.value()) << '\n'
              << "equilibrium_hashrate," << csv::format_number(h.value()) << '\n';
            if (shocked) o << "shocked_hashrate," << csv::format_number(shocked->value()) << '\n';
        });
        return kExitOk;
    }

    int oligopoly() {
        const MinerUnit unit = miner();
        const UsdPerDay rev = revenue();
        // --shares alone fixes the firm count.
        const std::optional<long long> from_shares =
            f_.shares.empty() ? std::nullopt : std::optional<long long>(static_cast<long long>(f_.shares.size()));
        const std::size_t n = to_count(pick(f_.n, cfg_.oligopoly.n, from_shares, "oligopoly.n"), "oligopoly.n", 1);
        const SymmetricEquilibrium eq = symmetric_equilibrium(n, rev, unit);
        const ThPerS competitive = competitive_equilibrium_hashrate(rev, unit);

        Report r;
        r.add("firms", std::to_string(n));
        r.add("equilibrium_hashrate", eq.hashrate.value(), "tH/s");
        r.add("per_firm_profit", eq.per_firm_profit.value(), "USD/day");
        r.add("competitive_hashrate", competitive.value(), "tH/s");
        if (competitive.value() > 0.0) r.add("hashrate_ratio", eq.hashrate / competitive);
        r.print(out_);

        std::vector<double> shares = f_.shares;
        if (shares.empty()) shares.assign(n, 1.0 / static_cast<double>(n));
        if (shares.size() != n) throw ValidationError("shares: expected " + std::to_string(n) + " values");
        const OligopolyConfig cfg(shares, rev, unit);
        const ThPerS at(f_.h ? *f_.h : eq.hashrate.value());
        const std::size_t adder = to_count(f_.adder.value_or(0), "adder", 0);
        const auto outcomes = firm_outcomes(cfg, at);
        const auto deltas = marginal_delta_adding_unit(cfg, at, adder);

        out_ << "\nat hashrate " << fmt6(at.value()) << " tH/s, firm " << adder << " adds one rig:\n";
        std::vector<std::vector<std::string>> grid{{"firm", "share", "hashrate", "profit", "delta"}};
        for (std::size_t i = 0; i < n; ++i)
            grid.push_back({std::to_string(i), fmt6(outcomes[i].share), fmt6(outcomes[i].hashrate.value()),
                            fmt6(outcomes[i].profit.value()), fmt6(deltas[i].value())});
        print_grid(out_, grid);
        write("firms.csv", [&](std::ostream& o) {
            o << "firm,share,hashrate_th_per_s,profit_usd_per_day,delta_usd_per_day\n";
            for (std::size_t i = 0; i < n; ++i)
                o << i << ',' << csv::format_number(outcomes[i].share) << ','
                  << csv::format_number(outcomes[i].hashrate.value()) << ','
                  << csv::format_number(outcomes[i].profit.value()) << ','
                  << csv::format_number(deltas[i].value()) << '\n';
        });
        return kExitOk;
    }

    int dynamics() {
        const MinerUnit unit = miner();
        const UsdPerDay rev = revenue();
        const std::size_t n = to_count(pick(f_.n, cfg_.oligopoly.n, {}, "oligopoly.n"), "oligopoly.n", 1);
        const double start = pick(f_.start_h, cfg_.oligopoly.start_hashrate_th_per_s, std::optional<double>(0.0),
                                  "oligopoly.start_hashrate_th_per_s");
        const auto max_iters = static_cast<std::uint64_t>(to_count(
            pick(f_.max_iters, cfg_.oligopoly.max_iters, std::optional<long long>(kDefaultMaxIters),
                 "oligopoly.max_iters"),
            "oligopoly.max_iters", 1));
        TraceMode mode = TraceMode::compressed;
        if (f_.trace == "full")
            mode = TraceMode::full;
        else if (f_.trace != "compressed")
            throw ValidationError("trace must be 'full' or 'compressed'");

        const DynamicsResult res = best_response_dynamics(n, rev, unit, ThPerS(start), max_iters, mode);
        const SymmetricEquilibrium eq = symmetric_equilibrium(n, rev, unit);
        std::uint64_t rigs = 0;
        for (auto u : res.units_added) rigs += u;

        Report r;
        r.add("final_hashrate", res.hashrate.value(), "tH/s");
        r.add("closed_form_hashrate", eq.hashrate.value(), "tH/s");
        r.add("difference", res.hashrate.value() - eq.hashrate.value(), "tH/s");
        r.add("rigs_added", std::to_string(rigs));
        r.add("turns", std::to_string(res.iterations));
        r.add("trace_rows", std::to_string(res.trace.size()));
        r.print(out_);
        write("trace.csv", [&](std::ostream& o) {
            o << "iteration,firm,hashrate_th_per_s,delta_usd_per_day,units\n";
            for (const auto& s : res.trace)
                o << s.iteration << ',' << (s.firm ? std::to_string(*s.firm) : std::string("all")) << ','
                  << csv::format_number(s.hashrate.value()) << ',' << csv::format_number(s.delta.value()) << ','
                  << s.units << '\n';
        });
        return kExitOk;
    }

    int issuance() {
        const IssuanceParams params = issuance_params();
        if (!f_.date && !f_.start && !cfg_.issuance.start_date)
            throw ValidationError("issuance needs --date or a projection start (--start / issuance.start_date)");
        Report r;
        if (f_.date) {
            const Epoch e = epoch_of(parse_date(*f_.date), params);
            r.add("date", *f_.date);
            r.add("epoch", std::to_string(e.index));
            r.add("subsidy", e.subsidy_btc_per_block, "BTC/block");
            r.add("daily_block_reward", e.daily_reward.value(), "BTC/day");
        }
        std::vector<ProjectionRow> rows;
        if (f_.start || cfg_.issuance.start_date) {
            const Date start = parse_date(pick(f_.start, cfg_.issuance.start_date, {}, "issuance.start_date"));
            const double years = pick(f_.years, cfg_.issuance.horizon_years, {}, "issuance.horizon_years");
            rows = revenue_projection(start, years, exchange_rate_path(), fees_path(), params);
            const Epoch first = epoch_of(rows.front().date, params);
            const Epoch last = epoch_of(rows.back().date, params);
            r.add("projection_start", format_date(rows.front().date));
            r.add("projection_end", format_date(rows.back().date));
            r.add("start_epoch", std::to_string(first.index));
            r.add("end_epoch", std::to_string(last.index));
            r.add("reward_ratio", reward_ratio(first, last));
            r.add("start_block_reward_revenue", rows.front().block_reward_usd.value(), "USD/day");
            r.add("end_block_reward_revenue", rows.back().block_reward_usd.value(), "USD/day");
            r.add("start_fee_share", rows.front().fee_share);
            r.add("end_fee_share", rows.back().fee_share);
        }
        r.print(out_);
        if (!rows.empty()) write("projection.csv", [&](std::ostream& o) { write_projection_csv(o, rows); });
        return kExitOk;
    }

    int fees() {
        const CapacityParams cap = capacity();
        Report r;
        r.add("max_transactions", cap.max_transactions(), "tx/day");
        std::vector<std::array<double, 3>> curve_rows;
        auto run_with = [&](const auto& curve, double lo, double hi) {
            const FeeOptimum opt = optimal_fee_rate(curve, cap);
            r.add("gamma_min", opt.gamma_min);
            r.add("max_fee_revenue", opt.max_revenue.value(), "USD/day");
            if (f_.gamma) {
                r.add("gamma", *f_.gamma);
                r.add("demand", demand(*f_.gamma, curve, cap), "tx/day");
                r.add("fee_revenue", fee_revenue(*f_.gamma, curve, cap).value(), "USD/day");
            }
            constexpr int kCurvePoints = 101;
            for (int i = 0; i < kCurvePoints; ++i) {
                const double g = std::clamp(lo * std::pow(hi / lo, i / double(kCurvePoints - 1)), lo, hi);
                curve_rows.push_back({g, demand(g, curve, cap), fee_revenue(g, curve, cap).value()});
            }
        };
        if (const auto table = demand_table()) {
            run_with(*table, table->min_gamma(), table->max_gamma());
        } else {
            const DemandCurve curve = demand_curve();
            const double g = curve.elastic() ? optimal_fee_rate(curve, cap).gamma_min : 1.0;
            run_with(curve, g / 10.0, g * 10.0);
        }
        r.print(out_);
        write("fee_curve.csv", [&](std::ostream& o) {
            o << "gamma,transactions_per_day,fee_revenue_usd\n";
            for (const auto& row : curve_rows)
                o << csv::format_number(row[0]) << ',' << csv::format_number(row[1]) << ','
                  << csv::format_number(row[2]) << '\n';
        });
        return kExitOk;
    }

    int equilibrium() {
        const CapacityParams cap = capacity();
        const MinerUnit unit = miner();
        const ReliabilityFloor floor{ThPerS(pick(f_.floor, cfg_.reliability_floor_th_per_s,
                                                 std::optional<double>(0.0), "reliability_floor_th_per_s"))};
        const auto table = demand_table();
        const FeeEquilibrium eq = table ? fee_only_equilibrium(*table, cap, unit, floor)
                                        : fee_only_equilibrium(demand_curve(), cap, unit, floor);
        Report r;
        r.add("gamma_min", eq.gamma_min);
        r.add("max_fee_revenue", eq.max_revenue.value(), "USD/day");
        r.add("equilibrium_hashrate", eq.hashrate.value(), "tH/s");
        r.add("critical_hashrate", floor.critical_hashrate.value(), "tH/s");
        r.add("secure", eq.secure ? "true" : "false");
        r.print(out_);
        write("equilibrium.csv", [&](std::ostream& o) {
            o << "gamma_min,max_fee_revenue_usd,hashrate_th_per_s,critical_hashrate_th_per_s,secure\n"
              << csv::format_number(eq.gamma_min) << ',' << csv::format_number(eq.max_revenue.value()) << ','
              << csv::format_number(eq.hashrate.value()) << ','
              << csv::format_number(floor.critical_hashrate.value()) << ',' << (eq.secure ? "true" : "false")
              << '\n';
        });
        return kExitOk;
    }

    int analyze_profit() {
        const MinerUnit unit = miner();
        const LoadedSeries loaded = load(data_path(f_.data, cfg_.data_file, "data_file"));
        const ProfitabilitySeries prof = profitability_series(loaded.series, unit);
        double lo = prof.points.front().value, hi = lo, sum = 0.0;
        for (const auto& p : prof.points) {
            lo = std::min(lo, p.value);
            hi = std::max(hi, p.value);
            sum += p.value;
        }
        Report r;
        describe(r, loaded);
        r.add("rows_used", std::to_string(prof.points.size()));
        r.add("rows_skipped", std::to_string(prof.skipped));
        r.add("min_profit", lo, "USD/day");
        r.add("mean_profit", sum / static_cast<double>(prof.points.size()), "USD/day");
        r.add("max_profit", hi, "USD/day");
        r.add("last_profit", prof.points.back().value, "USD/day");
        r.print(out_);
        write("profitability.csv", [&](std::ostream& o) { write_dated_csv(o, prof.points); });
        return kExitOk;
    }

    int analyze_fees() {
        const LoadedSeries loaded = load(data_path(f_.data, cfg_.data_file, "data_file"));
        const auto window = to_count(pick(f_.window, cfg_.analysis.fee_window_days,
                                          std::optional<long long>(kDefaultFeeWindow), "analysis.fee_window_days"),
                                     "analysis.fee_window_days", 1);
        const auto values = median_fee_series(loaded.series);
        const auto smoothed = rolling_mean(values, window);
        if (window > values.size())
            err_ << "warning: window of " << window << " exceeds the " << values.size()
                 << " median-fee observations; no smoothed values\n";
        std::size_t defined = 0;
        std::optional<double> last;
        for (const auto& s : smoothed)
            if (s.value) {
                ++defined;
                last = s.value;
            }
        Report r;
        describe(r, loaded);
        r.add("median_fee_rows", std::to_string(values.size()));
        r.add("window", std::to_string(window));
        r.add("smoothed_points", std::to_string(defined));
        if (last) r.add("last_smoothed", *last, "USD");
        r.print(out_);
        write("median_fee_smoothed.csv", [&](std::ostream& o) { write_dated_csv(o, smoothed); });
        return kExitOk;
    }

    int analyze_corr() {
        const LoadedSeries a = load(data_path(f_.data, cfg_.data_file, "data_file"));
        const LoadedSeries b = load(data_path(f_.data_b, cfg_.data_file_b, "data_file_b"));
        const auto window = to_count(pick(f_.window, cfg_.analysis.correlation_window_days,
                                          std::optional<long long>(kDefaultCorrelationWindow),
                                          "analysis.correlation_window_days"),
                                     "analysis.correlation_window_days", 1);
        const std::string mode_name = pick(f_.mode, cfg_.analysis.correlation_mode,
                                           std::optional<std::string>("non-overlapping"), "analysis.correlation_mode");
        WindowMode mode = WindowMode::non_overlapping;
        if (mode_name == "sliding")
            mode = WindowMode::sliding;
        else if (mode_name != "non-overlapping")
            throw ValidationError("analysis.correlation_mode must be 'non-overlapping' or 'sliding'");

        const LogReturns ra = log_returns(a.series);
        const LogReturns rb = log_returns(b.series);
        const auto windows = windowed_correlation(a.series, b.series, window, mode);

        Report r;
        r.add("returns_a", std::to_string(ra.returns.size()));
        r.add("returns_b", std::to_string(rb.returns.size()));
        r.add("gap_returns_excluded_a", std::to_string(ra.gaps_excluded));
        r.add("gap_returns_excluded_b", std::to_string(rb.gaps_excluded));
        r.add("windows", std::to_string(windows.size()));
        r.print(out_);
        out_ << '\n';
        std::vector<std::vector<std::string>> grid{{"start", "end", "pairs", "rho"}};
        for (const auto& w : windows)
            grid.push_back({format_date(w.start), format_date(w.end), std::to_string(w.pairs),
                            w.rho ? fmt6(*w.rho) : "- (" + w.reason + ")"});
        print_grid(out_, grid);

        std::vector<DatedOptional> rows;
        for (const auto& w : windows) rows.push_back({w.end, w.rho});
        write("correlation.csv", [&](std::ostream& o) { write_dated_csv(o, rows); });
        return kExitOk;
    }

private:
    MinerUnit miner() const {
        const double theta = pick(f_.theta, cfg_.miner.power_kw, std::optional<double>(kDefaultPowerKw), "miner.power_kw");
        const double p = pick(f_.p, cfg_.miner.electricity_usd_per_kwh, std::optional<double>(kDefaultElectricity),
                              "miner.electricity_usd_per_kwh");
        const double u = pick(f_.unit_hashrate, cfg_.miner.unit_hashrate_th_per_s,
                              std::optional<double>(MinerUnit::kDefaultHashrate), "miner.unit_hashrate_th_per_s");
        return MinerUnit(Kilowatts(theta), UsdPerKwh(p), ThPerS(u));
    }

    MarketState market(bool need_hashrate) const {
        const auto& m = cfg_.market;
        const double x = pick(f_.x, m.exchange_rate_usd_per_btc, {}, "market.exchange_rate_usd_per_btc");
        const double fee = pick(f_.fees, m.fees_usd_per_day, {}, "market.fees_usd_per_day");
        const double br = pick(f_.br, m.block_reward_btc_per_day, {}, "market.block_reward_btc_per_day");
        const double h = need_hashrate ? pick(f_.h, m.hashrate_th_per_s, {}, "market.hashrate_th_per_s") : 0.0;
        return MarketState(UsdPerBtc(x), UsdPerDay(fee), BtcPerDay(br), ThPerS(h));
    }

    UsdPerDay revenue() const {
        if (f_.revenue) {
            if (!std::isfinite(*f_.revenue) || *f_.revenue < 0.0)
                throw ValidationError("revenue must be finite and non-negative");
            return UsdPerDay(*f_.revenue);
        }
        return revenue_bundle(market(false));
    }

    IssuanceParams issuance_params() const {
        const auto& c = cfg_.issuance;
        IssuanceParams p;
        if (c.initial_subsidy_btc_per_block) p.initial_subsidy_btc_per_block = *c.initial_subsidy_btc_per_block;
        if (c.halving_interval_years) p.halving_interval_years = static_cast<int>(*c.halving_interval_years);
        if (c.halving_interval_blocks) p.halving_interval_blocks = *c.halving_interval_blocks;
        if (c.blocks_per_day) p.blocks_per_day = static_cast<int>(*c.blocks_per_day);
        if (const auto g = f_.genesis ? f_.genesis : c.genesis_date) p.genesis = parse_date(*g);
        if (const auto k = f_.clock ? f_.clock : c.clock) {
            if (*k == "calendar")
                p.clock = EpochClock::calendar;
            else if (*k == "block-height")
                p.clock = EpochClock::block_height;
            else
                throw ValidationError("issuance.clock must be 'calendar' or 'block-height'");
        }
        p.validate();
        return p;
    }

    std::vector<std::pair<Date, double>> load_dated_table(const fs::path& path) const {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open " + path.string());
        std::string line;
        std::getline(in, line);
        const auto header = csv::split_line(line);
        if (header.size() != 2 || header[0] != "date" || header[1] != "value")
            throw ValidationError(path.string() + ": expected header 'date,value'");
        std::vector<std::pair<Date, double>> pts;
        std::size_t row = 1;
        while (std::getline(in, line)) {
            ++row;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            const auto fields = csv::split_line(line);
            const auto v = fields.size() == 2 ? csv::parse_number(fields[1]) : std::nullopt;
            if (!v) throw ValidationError(path.string() + ": row " + std::to_string(row) + " is malformed");
            pts.emplace_back(parse_date(fields[0]), *v);
        }
        return pts;
    }

    Path<UsdPerBtc> exchange_rate_path() const {
        if (const auto t = f_.x_table ? fs::path(*f_.x_table) : optional_path(cfg_.issuance.exchange_rate_table))
            return table_path_usd_per_btc(load_dated_table(*t));
        return constant_path(UsdPerBtc(
            pick(f_.x, cfg_.market.exchange_rate_usd_per_btc, {}, "market.exchange_rate_usd_per_btc")));
    }

    Path<UsdPerDay> fees_path() const {
        if (const auto t = f_.fees_table ? fs::path(*f_.fees_table) : optional_path(cfg_.issuance.fees_table))
            return table_path_usd_per_day(load_dated_table(*t));
        return constant_path(UsdPerDay(pick(f_.fees, cfg_.market.fees_usd_per_day, {}, "market.fees_usd_per_day")));
    }

    std::optional<fs::path> optional_path(const std::optional<std::string>& configured) const {
        if (!configured) return std::nullopt;
        return cfg_.resolve(*configured);
    }

    CapacityParams capacity() const {
        const auto& c = cfg_.capacity;
        const CapacityParams def;
        const auto bpd = pick(f_.blocks_per_day, c.blocks_per_day,
                              std::optional<long long>(def.blocks_per_day()), "capacity.blocks_per_day");
        if (bpd <= 0 || bpd > 1'000'000) throw ValidationError("capacity.blocks_per_day out of range");
        return CapacityParams(static_cast<int>(bpd),
                              pick(f_.block_size, c.block_size_bytes, std::optional<double>(def.block_size_bytes()),
                                   "capacity.block_size_bytes"),
                              pick(f_.tx_size, c.avg_tx_size_bytes, std::optional<double>(def.avg_tx_size_bytes()),
                                   "capacity.avg_tx_size_bytes"));
    }

    DemandCurve demand_curve() const {
        const auto& d = cfg_.demand;
        return DemandCurve(pick(f_.scale, d.scale, {}, "demand.scale"),
                           pick(f_.elasticity, d.elasticity, {}, "demand.elasticity"),
                           pick(f_.tx_value, d.mean_tx_value_usd, {}, "demand.mean_tx_value_usd"));
    }

    std::optional<TabulatedDemand> demand_table() const {
        const auto path = f_.demand_table ? std::optional<fs::path>(*f_.demand_table) : optional_path(cfg_.demand.table);
        if (!path) return std::nullopt;
        return TabulatedDemand::load_csv(
            *path, pick(f_.tx_value, cfg_.demand.mean_tx_value_usd, {}, "demand.mean_tx_value_usd"));
    }

    fs::path data_path(const std::optional<std::string>& flag, const std::optional<std::string>& conf,
                       std::string_view name) const {
        if (flag) return *flag;
        if (conf) return cfg_.resolve(*conf);
        throw ValidationError("missing required value '" + std::string(name) + "'");
    }

    ColumnMapping columns() const {
        ColumnMapping m;
        const auto& c = cfg_.columns;
        if (c.date) m.date = *c.date;
        if (c.price_usd) m.price_usd = *c.price_usd;
        if (c.fees_usd_per_day) m.fees_usd_per_day = *c.fees_usd_per_day;
        if (c.median_fee_usd) m.median_fee_usd = *c.median_fee_usd;
        if (c.block_reward_btc_per_day) m.block_reward_btc_per_day = *c.block_reward_btc_per_day;
        if (c.hashrate_th_per_s) m.hashrate_th_per_s = *c.hashrate_th_per_s;
        return m;
    }

    LoadedSeries load(const fs::path& path) const {
        LoadedSeries s = load_csv(path, columns());
        if (s.out_of_order > 0)
            err_ << "warning: " << path.string() << ": " << s.out_of_order << " out-of-order rows were sorted\n";
        return s;
    }

    static void describe(Report& r, const LoadedSeries& s) {
        r.add("rows", std::to_string(s.series.records.size()));
        r.add("date_gaps", std::to_string(s.series.gaps()));
        if (!s.series.records.empty()) {
            r.add("first_date", format_date(s.series.records.front().date));
            r.add("last_date", format_date(s.series.records.back().date));
        }
    }

    void write(const std::string& name, const std::function<void(std::ostream&)>& body) const {
        const std::string dir = !f_.out.empty() ? f_.out : cfg_.output_dir ? cfg_.resolve(*cfg_.output_dir).string() : "";
        if (dir.empty()) return;
        fs::create_directories(dir);
        const fs::path path = fs::path(dir) / name;
        std::ofstream o(path, std::ios::binary);
        if (!o) throw ComputationError("cannot write " + path.string());
        body(o);
        if (!o) throw ComputationError("failed writing " + path.string());
    }

    const Flags& f_;
    ScenarioConfig cfg_;
    std::ostream& out_;
    std::ostream& err_;
};

void add_miner(CLI::App* s, Flags& f) {
    s->add_option("--theta", f.theta, "rig power draw, kW (default 3)");
    s->add_option("--p", f.p, "electricity price, USD/kWh (default 0.15)");
    s->add_option("--unit-hashrate", f.unit_hashrate, "rig hashrate, tH/s (default 100)");
}

void add_market(CLI::App* s, Flags& f, bool with_hashrate) {
    s->add_option("--x", f.x, "exchange rate, USD/BTC");
    s->add_option("--br", f.br, "block reward, BTC/day");
    s->add_option("--fees", f.fees, "transaction fees, USD/day");
    if (with_hashrate) s->add_option("--h", f.h, "network hashrate, tH/s");
}

void add_demand(CLI::App* s, Flags& f) {
    s->add_option("--scale", f.scale, "demand scale A (tx/day at gamma = 1)");
    s->add_option("--elasticity", f.elasticity, "demand elasticity (> 1)");
    s->add_option("--tx-value", f.tx_value, "mean transaction value, USD");
    s->add_option("--demand-table", f.demand_table, "CSV gamma,transactions_per_day");
    s->add_option("--blocks-per-day", f.blocks_per_day, "blocks per day (default 144)");
    s->add_option("--block-size", f.block_size, "block size, bytes (default 1000000)");
    s->add_option("--tx-size", f.tx_size, "average transaction size, bytes (default 250)");
}

}  // namespace

const std::vector<OperationBinding>& operation_map() {
    static const std::vector<OperationBinding> map{
        {"profit", {"daily_energy_cost", "marginal_revenue", "marginal_profit"}},
        {"supply", {"competitive_equilibrium_hashrate", "supply_after_electricity_shock"}},
        {"oligopoly", {"symmetric_equilibrium", "firm_profit", "marginal_delta_adding_unit"}},
        {"dynamics", {"best_response_dynamics"}},
        {"issuance", {"epoch_of", "reward_ratio", "revenue_projection"}},
        {"fees", {"demand", "fee_revenue", "optimal_fee_rate"}},
        {"equilibrium", {"fee_only_equilibrium"}},
        {"analyze-profit", {"load_csv", "profitability_series"}},
        {"analyze-fees", {"rolling_mean"}},
        {"analyze-corr", {"log_returns", "windowed_correlation"}},
    };
    return map;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bitcoin mining and fee-market economics toolkit", "btcecon"};
    // No -h short form: --h is the hashrate flag.
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", BTCECON_VERSION);
    app.require_subcommand(1);
    Flags f;

    auto common = [&](CLI::App* s) {
        s->add_option("--config", f.config, "JSON scenario file");
        s->add_option("--out", f.out, "directory for CSV output");
    };

    auto* profit = app.add_subcommand("profit", "marginal profit of one rig");
    common(profit);
    add_miner(profit, f);
    add_market(profit, f, true);

    auto* supply = app.add_subcommand("supply", "competitive hashrate supply and electricity shocks");
    common(supply);
    add_miner(supply, f);
    add_market(supply, f, true);
    supply->add_option("--revenue", f.revenue, "revenue bundle F + X*BR, USD/day (overrides --x/--br/--fees)");
    supply->add_option("--new-p", f.new_p, "new electricity price, USD/kWh");

    auto* olig = app.add_subcommand("oligopoly", "symmetric n-firm equilibrium and per-firm effects");
    common(olig);
    add_miner(olig, f);
    add_market(olig, f, false);
    olig->add_option("--revenue", f.revenue, "revenue bundle F + X*BR, USD/day");
    olig->add_option("--n", f.n, "number of firms");
    olig->add_option("--shares", f.shares, "hashrate shares (default equal)")->delimiter(',');
    olig->add_option("--h", f.h, "network hashrate for the firm table (default: equilibrium)");
    olig->add_option("--adder", f.adder, "firm adding one rig (default 0)");

    auto* dyn = app.add_subcommand("dynamics", "round-robin best-response dynamics");
    common(dyn);
    add_miner(dyn, f);
    add_market(dyn, f, false);
    dyn->add_option("--revenue", f.revenue, "revenue bundle F + X*BR, USD/day");
    dyn->add_option("--n", f.n, "number of firms");
    dyn->add_option("--start-h", f.start_h, "starting network hashrate, tH/s (default 0)");
    dyn->add_option("--max-iters", f.max_iters, "turn budget");
    dyn->add_option("--trace", f.trace, "full | compressed (default compressed)");

    auto* iss = app.add_subcommand("issuance", "halving epochs and revenue projection");
    common(iss);
    iss->add_option("--date", f.date, "report the epoch in force on this date");
    iss->add_option("--start", f.start, "projection start date");
    iss->add_option("--years", f.years, "projection horizon, years");
    iss->add_option("--x", f.x, "constant exchange rate, USD/BTC");
    iss->add_option("--fees", f.fees, "constant fees, USD/day");
    iss->add_option("--x-table", f.x_table, "CSV date,value exchange-rate path");
    iss->add_option("--fees-table", f.fees_table, "CSV date,value fee path");
    iss->add_option("--genesis", f.genesis, "genesis date (default 2009-01-03)");
    iss->add_option("--clock", f.clock, "calendar | block-height");

    auto* fees = app.add_subcommand("fees", "fee demand and the revenue-maximizing fee rate");
    common(fees);
    add_demand(fees, f);
    fees->add_option("--gamma", f.gamma, "evaluate demand and revenue at this fee rate");

    auto* eq = app.add_subcommand("equilibrium", "fee-only network equilibrium");
    common(eq);
    add_demand(eq, f);
    add_miner(eq, f);
    eq->add_option("--floor", f.floor, "critical hashrate H_c, tH/s (default 0)");

    auto* ap = app.add_subcommand("analyze-profit", "daily rig profitability from a market CSV");
    common(ap);
    add_miner(ap, f);
    ap->add_option("--data", f.data, "market CSV");

    auto* af = app.add_subcommand("analyze-fees", "trailing mean of the daily median fee");
    common(af);
    af->add_option("--data", f.data, "market CSV with a median fee column");
    af->add_option("--window", f.window, "window, observations (default 200)");

    auto* ac = app.add_subcommand("analyze-corr", "windowed correlation of daily log returns");
    common(ac);
    ac->add_option("--a", f.data, "first asset CSV");
    ac->add_option("--b", f.data_b, "second asset CSV");
    ac->add_option("--window", f.window, "window, days (default 100)");
    ac->add_option("--mode", f.mode, "non-overlapping | sliding");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        // --help and --version
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitValidation;
    }

    try {
        ScenarioConfig cfg = f.config.empty() ? ScenarioConfig{} : load_scenario(f.config);
        Runner runner(f, std::move(cfg), out, err);
        if (profit->parsed()) return runner.profit();
        if (supply->parsed()) return runner.supply();
        if (olig->parsed()) return runner.oligopoly();
        if (dyn->parsed()) return runner.dynamics();
        if (iss->parsed()) return runner.issuance();
        if (fees->parsed()) return runner.fees();
        if (eq->parsed()) return runner.equilibrium();
        if (ap->parsed()) return runner.analyze_profit();
        if (af->parsed()) return runner.analyze_fees();
        if (ac->parsed()) return runner.analyze_corr();
        return kExitValidation;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace btcecon::cli
