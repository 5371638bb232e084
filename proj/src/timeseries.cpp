#include "btcecon/timeseries.hpp"

#include "btcecon/csv.hpp"
#include "btcecon/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>

namespace btcecon {

namespace {

constexpr std::chrono::days kOneDay{1};

std::optional<std::size_t> find_column(const std::vector<std::string>& header, const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
}

std::string join_rows(const std::vector<std::size_t>& rows) {
    std::string out;
    const std::size_t shown = std::min<std::size_t>(rows.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) out += (i ? ", " : "") + std::to_string(rows[i]);
    if (rows.size() > shown) out += ", ... (" + std::to_string(rows.size()) + " total)";
    return out;
}

void write_optional(std::ostream& out, const std::optional<double>& v) {
    if (v) out << csv::format_number(*v);
}

}  // namespace

std::size_t Series::gaps() const {
    std::size_t n = 0;
    for (std::size_t i = 1; i < records.size(); ++i)
        if (records[i].date - records[i - 1].date > kOneDay) ++n;
    return n;
}

LoadedSeries parse_csv(std::istream& in, const std::string& label, const ColumnMapping& mapping) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(label + ": file is empty (header row required)");
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const auto header = csv::split_line(line);

    const auto date_col = find_column(header, mapping.date);
    const auto price_col = find_column(header, mapping.price_usd);
    if (!date_col) throw ValidationError(label + ": missing required column '" + mapping.date + "'");
    if (!price_col) throw ValidationError(label + ": missing required column '" + mapping.price_usd + "'");
    const auto fees_col = find_column(header, mapping.fees_usd_per_day);
    const auto median_col = find_column(header, mapping.median_fee_usd);
    const auto reward_col = find_column(header, mapping.block_reward_btc_per_day);
    const auto hash_col = find_column(header, mapping.hashrate_th_per_s);

    LoadedSeries out;
    out.series.label = label;
    std::vector<std::size_t> bad_rows;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = csv::split_line(line);
        if (fields.size() != header.size()) {
            bad_rows.push_back(row);
            continue;
        }
        DailyRecord rec;
        rec.date = parse_date(fields[*date_col]);

        bool ok = true;
        auto required = [&](std::size_t col) {
            const auto v = csv::parse_number(fields[col]);
            if (!v || *v < 0.0) {
                ok = false;
                return 0.0;
            }
            return *v;
        };
        auto optional = [&](const std::optional<std::size_t>& col) -> std::optional<double> {
            if (!col || fields[*col].empty()) return std::nullopt;
            const auto v = csv::parse_number(fields[*col]);
            if (!v || *v < 0.0) ok = false;
            return v;
        };
        rec.price_usd = required(*price_col);
        rec.fees_usd_per_day = optional(fees_col);
        rec.median_fee_usd = optional(median_col);
        rec.block_reward_btc_per_day = optional(reward_col);
        rec.hashrate_th_per_s = optional(hash_col);
        if (!ok) {
            bad_rows.push_back(row);
            continue;
        }
        out.series.records.push_back(std::move(rec));
    }
    if (!bad_rows.empty())
        throw ValidationError(label + ": malformed or negative numeric values in rows " + join_rows(bad_rows));

    auto& recs = out.series.records;
    for (std::size_t i = 1; i < recs.size(); ++i)
        if (recs[i].date < recs[i - 1].date) ++out.out_of_order;
    std::stable_sort(recs.begin(), recs.end(), [](const auto& x, const auto& y) { return x.date < y.date; });
    for (std::size_t i = 1; i < recs.size(); ++i)
        if (recs[i].date == recs[i - 1].date)
            throw ValidationError(label + ": duplicate date " + format_date(recs[i].date));
    return out;
}

LoadedSeries load_csv(const std::filesystem::path& path, const ColumnMapping& mapping) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    return parse_csv(in, path.string(), mapping);
}

void write_csv(std::ostream& out, const Series& s) {
    const ColumnMapping names;
    out << names.date << ',' << names.price_usd << ',' << names.fees_usd_per_day << ',' << names.median_fee_usd
        << ',' << names.block_reward_btc_per_day << ',' << names.hashrate_th_per_s << '\n';
    for (const auto& r : s.records) {
        out << format_date(r.date) << ',' << csv::format_number(r.price_usd) << ',';
        write_optional(out, r.fees_usd_per_day);
        out << ',';
        write_optional(out, r.median_fee_usd);
        out << ',';
        write_optional(out, r.block_reward_btc_per_day);
        out << ',';
        write_optional(out, r.hashrate_th_per_s);
        out << '\n';
    }
}

ProfitabilitySeries profitability_series(const Series& s, const MinerUnit& unit) {
    ProfitabilitySeries out;
    for (const auto& r : s.records) {
        if (!r.fees_usd_per_day || !r.block_reward_btc_per_day || !r.hashrate_th_per_s ||
            !(*r.hashrate_th_per_s > 0.0)) {
            ++out.skipped;
            continue;
        }
        const MarketState state(UsdPerBtc(r.price_usd), UsdPerDay(*r.fees_usd_per_day),
                                BtcPerDay(*r.block_reward_btc_per_day), ThPerS(*r.hashrate_th_per_s));
        out.points.push_back({r.date, marginal_profit(state, unit).value()});
    }
    if (out.points.empty())
        throw ValidationError(s.label + ": no row carries price, fees, block reward and hashrate");
    return out;
}

std::vector<DatedValue> median_fee_series(const Series& s) {
    std::vector<DatedValue> out;
    for (const auto& r : s.records)
        if (r.median_fee_usd) out.push_back({r.date, *r.median_fee_usd});
    return out;
}

std::vector<DatedOptional> rolling_mean(const std::vector<DatedValue>& values, std::size_t window) {
    if (window == 0) throw ValidationError("rolling window must be at least 1");
    std::vector<DatedOptional> out;
    out.reserve(values.size());
    // Each window is summed afresh; no drift from a running sum.
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i + 1 < window) {
            out.push_back({values[i].date, std::nullopt});
            continue;
        }
        double sum = 0.0;
        for (std::size_t j = i + 1 - window; j <= i; ++j) sum += values[j].value;
        out.push_back({values[i].date, sum / static_cast<double>(window)});
    }
    return out;
}

LogReturns log_returns(const Series& s) {
    LogReturns out;
    for (const auto& r : s.records)
        if (!(r.price_usd > 0.0))
            throw ValidationError(s.label + ": non-positive price on " + format_date(r.date));
    for (std::size_t i = 1; i < s.records.size(); ++i) {
        const auto& prev = s.records[i - 1];
        const auto& cur = s.records[i];
        if (cur.date - prev.date != kOneDay) {
            ++out.gaps_excluded;
            continue;
        }
        out.returns.push_back({cur.date, std::log(cur.price_usd) - std::log(prev.price_usd)});
    }
    return out;
}

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ValidationError("pearson: inputs differ in length");
    const std::size_t n = x.size();
    if (n < 2) return std::nullopt;
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<CorrelationWindow> windowed_correlation(const Series& a, const Series& b, std::size_t window_days,
                                                    WindowMode mode) {
    if (window_days == 0) throw ValidationError("correlation window must be at least 1 day");

    Series ja{a.label, {}};
    Series jb{b.label, {}};
    {
        std::size_t i = 0, j = 0;
        while (i < a.records.size() && j < b.records.size()) {
            const Date da = a.records[i].date;
            const Date db = b.records[j].date;
            if (da < db) {
                ++i;
            } else if (db < da) {
                ++j;
            } else {
                ja.records.push_back(a.records[i++]);
                jb.records.push_back(b.records[j++]);
            }
        }
    }
    if (ja.records.empty())
        throw ValidationError("series '" + a.label + "' and '" + b.label + "' share no dates");

    const LogReturns ra = log_returns(ja);
    const LogReturns rb = log_returns(jb);
    const auto& xs = ra.returns;
    const auto& ys = rb.returns;
    std::vector<CorrelationWindow> out;
    if (xs.empty()) return out;

    const auto span = std::chrono::days(static_cast<long long>(window_days));
    auto evaluate = [&](Date start, Date end) {
        CorrelationWindow w{start, end, 0, std::nullopt, {}};
        std::vector<double> wx, wy;
        const auto lo = std::lower_bound(xs.begin(), xs.end(), start,
                                         [](const DatedValue& v, Date d) { return v.date < d; });
        for (auto it = lo; it != xs.end() && it->date <= end; ++it) {
            const auto k = static_cast<std::size_t>(it - xs.begin());
            wx.push_back(xs[k].value);
            wy.push_back(ys[k].value);
        }
        w.pairs = wx.size();
        if (w.pairs < kMinCorrelationPairs) {
            w.reason = "fewer than " + std::to_string(kMinCorrelationPairs) + " aligned return pairs";
            return w;
        }
        w.rho = pearson(wx, wy);
        if (!w.rho) w.reason = "zero variance in at least one leg";
        return w;
    };

    const Date first = xs.front().date;
    const Date last = xs.back().date;
    if (mode == WindowMode::non_overlapping) {
        for (Date start = first; start <= last; start += span) out.push_back(evaluate(start, start + span - kOneDay));
    } else {
        for (const auto& r : xs)
            if (r.date - first >= span - kOneDay) out.push_back(evaluate(r.date - span + kOneDay, r.date));
    }
    return out;
}

void write_dated_csv(std::ostream& out, const std::vector<DatedValue>& rows) {
    out << "date,value\n";
    for (const auto& r : rows) out << format_date(r.date) << ',' << csv::format_number(r.value) << '\n';
}

void write_dated_csv(std::ostream& out, const std::vector<DatedOptional>& rows) {
    out << "date,value\n";
    for (const auto& r : rows) {
        out << format_date(r.date) << ',';
        write_optional(out, r.value);
        out << '\n';
    }
}

}  // namespace btcecon
