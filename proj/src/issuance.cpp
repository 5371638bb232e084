#include "btcecon/issuance.hpp"

#include "btcecon/core_model.hpp"
#include "btcecon/csv.hpp"
#include "btcecon/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <string>

namespace btcecon {

namespace {

constexpr double kDaysPerYear = 365.25;
constexpr double kScheduleConsistencyTol = 0.05;

template <class Q>
Path<Q> table_path(std::vector<std::pair<Date, double>> points) {
    if (points.empty()) throw ValidationError("path table is empty");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i - 1].first < points[i].first))
            throw ValidationError("path table dates must be strictly increasing at " + format_date(points[i].first));
    return [pts = std::move(points)](Date d) {
        if (d < pts.front().first || d > pts.back().first)
            throw ValidationError("date " + format_date(d) + " outside path table range");
        const auto hi = std::lower_bound(pts.begin(), pts.end(), d,
                                         [](const auto& p, Date x) { return p.first < x; });
        if (hi->first == d) return Q(hi->second);
        const auto lo = hi - 1;
        const double span = static_cast<double>((hi->first - lo->first).count());
        const double t = static_cast<double>((d - lo->first).count()) / span;
        return Q(lo->second + t * (hi->second - lo->second));
    };
}

template <class Q>
double evaluate(const Path<Q>& path, Date d, const char* what) {
    double v = 0.0;
    try {
        v = path(d).value();
    } catch (const std::exception& e) {
        throw ComputationError(std::string(what) + " path failed at " + format_date(d) + ": " + e.what());
    }
    if (!std::isfinite(v) || v < 0.0)
        throw ComputationError(std::string(what) + " path returned " + std::to_string(v) + " at " + format_date(d));
    return v;
}

}  // namespace

void IssuanceParams::validate() const {
    if (!(initial_subsidy_btc_per_block > 0.0) || !std::isfinite(initial_subsidy_btc_per_block))
        throw ValidationError("initial_subsidy_btc_per_block must be positive");
    if (halving_interval_years <= 0) throw ValidationError("halving_interval_years must be positive");
    if (halving_interval_blocks <= 0) throw ValidationError("halving_interval_blocks must be positive");
    if (blocks_per_day <= 0) throw ValidationError("blocks_per_day must be positive");
    const double implied = blocks_per_day * kDaysPerYear * halving_interval_years;
    const double blocks = static_cast<double>(halving_interval_blocks);
    if (std::abs(implied - blocks) > kScheduleConsistencyTol * blocks)
        throw ValidationError("halving_interval_blocks inconsistent with blocks_per_day * 365.25 * "
                              "halving_interval_years (" +
                              std::to_string(implied) + " vs " + std::to_string(blocks) + ")");
}

Epoch epoch_at(int index, const IssuanceParams& params) {
    if (index < 0) throw ValidationError("epoch index must be non-negative");
    const double subsidy = std::ldexp(params.initial_subsidy_btc_per_block, -index);
    return {index, subsidy, BtcPerDay(params.blocks_per_day * subsidy)};
}

Epoch epoch_of(Date date, const IssuanceParams& params) {
    if (date < params.genesis)
        throw ValidationError("date " + format_date(date) + " precedes genesis " + format_date(params.genesis));
    int index = 0;
    if (params.clock == EpochClock::calendar) {
        const int years = static_cast<int>(std::chrono::year_month_day(date).year()) -
                          static_cast<int>(std::chrono::year_month_day(params.genesis).year());
        index = years / params.halving_interval_years;
        // Year arithmetic can overshoot by one when the anniversary is still ahead.
        while (index > 0 && add_years(params.genesis, index * params.halving_interval_years) > date) --index;
        while (add_years(params.genesis, (index + 1) * params.halving_interval_years) <= date) ++index;
    } else {
        const long long days = (date - params.genesis).count();
        index = static_cast<int>(days * params.blocks_per_day / params.halving_interval_blocks);
    }
    return epoch_at(index, params);
}

double reward_ratio(const Epoch& earlier, const Epoch& later) {
    if (later.index < earlier.index)
        throw ValidationError("reward_ratio expects the later epoch second");
    return later.daily_reward / earlier.daily_reward;
}

Path<UsdPerBtc> table_path_usd_per_btc(std::vector<std::pair<Date, double>> points) {
    return table_path<UsdPerBtc>(std::move(points));
}

Path<UsdPerDay> table_path_usd_per_day(std::vector<std::pair<Date, double>> points) {
    return table_path<UsdPerDay>(std::move(points));
}

std::vector<ProjectionRow> revenue_projection(Date start, double horizon_years, const Path<UsdPerBtc>& exchange_rate,
                                              const Path<UsdPerDay>& fees, const IssuanceParams& params) {
    if (!std::isfinite(horizon_years) || horizon_years < 0.0)
        throw ValidationError("horizon_years must be non-negative");
    params.validate();
    const double whole = std::floor(horizon_years);
    const auto extra = std::chrono::days(std::llround((horizon_years - whole) * kDaysPerYear));
    const Date end = add_years(start, static_cast<int>(whole)) + extra;

    std::vector<ProjectionRow> rows;
    rows.reserve(static_cast<std::size_t>((end - start).count()) + 1);
    for (Date d = start; d <= end; d += std::chrono::days(1)) {
        const Epoch epoch = epoch_of(d, params);
        const double x = evaluate(exchange_rate, d, "exchange rate");
        const double f = evaluate(fees, d, "fees");
        const double reward_usd = revenue_bundle(UsdPerDay(0.0), UsdPerBtc(x), epoch.daily_reward).value();
        const double total = f + reward_usd;
        rows.push_back({d, UsdPerDay(reward_usd), UsdPerDay(f), total > 0.0 ? f / total : 0.0});
    }
    return rows;
}

void write_projection_csv(std::ostream& out, const std::vector<ProjectionRow>& rows) {
    out << "date,block_reward_usd,fees_usd,fee_share\n";
    for (const auto& r : rows)
        out << format_date(r.date) << ',' << csv::format_number(r.block_reward_usd.value()) << ','
            << csv::format_number(r.fees_usd.value()) << ',' << csv::format_number(r.fee_share) << '\n';
}

}  // namespace btcecon
