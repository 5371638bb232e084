#include "btcecon/fee_market.hpp"

#include "btcecon/csv.hpp"
#include "btcecon/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

namespace btcecon {

namespace {

void require_gamma(double gamma) {
    if (!std::isfinite(gamma) || gamma <= 0.0)
        throw ValidationError("fee rate gamma must be positive, got " + std::to_string(gamma));
}

void require_positive(double v, const char* field) {
    if (!std::isfinite(v) || v <= 0.0) throw ValidationError(std::string(field) + " must be positive");
}

FeeEquilibrium equilibrium_from(const FeeOptimum& opt, const MinerUnit& unit, const ReliabilityFloor& floor) {
    if (!std::isfinite(floor.critical_hashrate.value()) || floor.critical_hashrate.value() < 0.0)
        throw ValidationError("critical_hashrate_th_per_s must be non-negative");
    if (daily_energy_cost(unit).value() == 0.0)
        throw ValidationError("electricity_usd_per_kwh must be positive for a fee-only equilibrium");
    const ThPerS h = competitive_equilibrium_hashrate(opt.max_revenue, unit);
    return {opt.gamma_min, opt.max_revenue, h, h >= floor.critical_hashrate};
}

}  // namespace

DemandCurve::DemandCurve(double scale, double elasticity, double mean_tx_value_usd)
    : scale_(scale), elasticity_(elasticity), mean_tx_value_usd_(mean_tx_value_usd) {
    require_positive(scale, "demand scale");
    require_positive(elasticity, "demand elasticity");
    require_positive(mean_tx_value_usd, "mean_tx_value_usd");
}

double DemandCurve::raw(double gamma) const {
    require_gamma(gamma);
    return scale_ * std::pow(gamma, -elasticity_);
}

CapacityParams::CapacityParams(int blocks_per_day, double block_size_bytes, double avg_tx_size_bytes)
    : blocks_per_day_(blocks_per_day), block_size_bytes_(block_size_bytes), avg_tx_size_bytes_(avg_tx_size_bytes) {
    if (blocks_per_day <= 0) throw ValidationError("blocks_per_day must be positive");
    require_positive(block_size_bytes, "block_size_bytes");
    require_positive(avg_tx_size_bytes, "avg_tx_size_bytes");
    max_tx_ = std::floor(blocks_per_day * block_size_bytes / avg_tx_size_bytes);
    if (!(max_tx_ > 0.0) || !std::isfinite(max_tx_))
        throw ValidationError("capacity admits no transactions (N_max = 0)");
}

double demand(double gamma, const DemandCurve& curve, const CapacityParams& cap) {
    return std::min(curve.raw(gamma), cap.max_transactions());
}

UsdPerDay fee_revenue(double gamma, const DemandCurve& curve, const CapacityParams& cap) {
    return UsdPerDay(gamma * curve.mean_tx_value_usd() * demand(gamma, curve, cap));
}

FeeOptimum optimal_fee_rate(const DemandCurve& curve, const CapacityParams& cap) {
    if (!curve.elastic())
        throw ValidationError("demand elasticity must exceed 1 for revenue to peak at capacity, got " +
                              std::to_string(curve.elasticity()));
    const double n_max = cap.max_transactions();
    const double gamma = std::pow(curve.scale() / n_max, 1.0 / curve.elasticity());
    return {gamma, UsdPerDay(gamma * curve.mean_tx_value_usd() * n_max)};
}

FeeEquilibrium fee_only_equilibrium(const DemandCurve& curve, const CapacityParams& cap, const MinerUnit& unit,
                                    const ReliabilityFloor& floor) {
    return equilibrium_from(optimal_fee_rate(curve, cap), unit, floor);
}

TabulatedDemand::TabulatedDemand(std::vector<std::pair<double, double>> points, double mean_tx_value_usd)
    : points_(std::move(points)), mean_tx_value_usd_(mean_tx_value_usd) {
    require_positive(mean_tx_value_usd, "mean_tx_value_usd");
    if (points_.size() < 2) throw ValidationError("tabulated demand needs at least two points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto [g, n] = points_[i];
        if (!std::isfinite(g) || g <= 0.0 || !std::isfinite(n) || n <= 0.0)
            throw ValidationError("tabulated demand row " + std::to_string(i + 1) + ": gamma and transactions must be positive");
        if (i > 0 && !(g > points_[i - 1].first))
            throw ValidationError("tabulated demand row " + std::to_string(i + 1) + ": gamma must be strictly increasing");
        if (i > 0 && !(n < points_[i - 1].second))
            throw ValidationError("tabulated demand row " + std::to_string(i + 1) +
                                  ": transactions_per_day must be strictly decreasing");
    }
}

TabulatedDemand TabulatedDemand::parse_csv(std::istream& in, double mean_tx_value_usd, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(source + ": empty demand table");
    const auto header = csv::split_line(line);
    if (header.size() != 2 || header[0] != "gamma" || header[1] != "transactions_per_day")
        throw ValidationError(source + ": expected header 'gamma,transactions_per_day'");
    std::vector<std::pair<double, double>> pts;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = csv::split_line(line);
        const auto g = fields.size() == 2 ? csv::parse_number(fields[0]) : std::nullopt;
        const auto n = fields.size() == 2 ? csv::parse_number(fields[1]) : std::nullopt;
        if (!g || !n) throw ValidationError(source + ": row " + std::to_string(row) + " is not two numbers");
        pts.emplace_back(*g, *n);
    }
    return TabulatedDemand(std::move(pts), mean_tx_value_usd);
}

TabulatedDemand TabulatedDemand::load_csv(const std::filesystem::path& path, double mean_tx_value_usd) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open demand table " + path.string());
    return parse_csv(in, mean_tx_value_usd, path.string());
}

double TabulatedDemand::raw(double gamma) const {
    require_gamma(gamma);
    if (gamma < min_gamma() || gamma > max_gamma())
        throw ValidationError("gamma " + std::to_string(gamma) + " outside tabulated range [" +
                              std::to_string(min_gamma()) + ", " + std::to_string(max_gamma()) + "]");
    const auto hi = std::lower_bound(points_.begin(), points_.end(), gamma,
                                     [](const auto& p, double g) { return p.first < g; });
    if (hi->first == gamma) return hi->second;
    const auto lo = hi - 1;
    const double t = std::log(gamma / lo->first) / std::log(hi->first / lo->first);
    return std::exp(std::log(lo->second) + t * std::log(hi->second / lo->second));
}

double demand(double gamma, const TabulatedDemand& curve, const CapacityParams& cap) {
    return std::min(curve.raw(gamma), cap.max_transactions());
}

UsdPerDay fee_revenue(double gamma, const TabulatedDemand& curve, const CapacityParams& cap) {
    return UsdPerDay(gamma * curve.mean_tx_value_usd() * demand(gamma, curve, cap));
}

FeeOptimum optimal_fee_rate(const TabulatedDemand& curve, const CapacityParams& cap, std::size_t grid_points) {
    const auto& pts = curve.points();
    const double n_max = cap.max_transactions();
    std::vector<double> candidates;
    candidates.reserve(grid_points + 2 * pts.size());
    for (const auto& p : pts) candidates.push_back(p.first);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const auto [ga, na] = pts[i - 1];
        const auto [gb, nb] = pts[i];
        if (na > n_max && nb < n_max) {
            const double slope = std::log(na / nb) / std::log(gb / ga);
            candidates.push_back(std::clamp(ga * std::pow(na / n_max, 1.0 / slope), ga, gb));
        }
    }
    if (grid_points >= 2) {
        const double lg0 = std::log(curve.min_gamma());
        const double step = (std::log(curve.max_gamma()) - lg0) / static_cast<double>(grid_points - 1);
        for (std::size_t i = 0; i < grid_points; ++i)
            candidates.push_back(std::clamp(std::exp(lg0 + step * static_cast<double>(i)), curve.min_gamma(),
                                            curve.max_gamma()));
    }
    FeeOptimum best{candidates.front(), fee_revenue(candidates.front(), curve, cap)};
    for (double g : candidates) {
        const UsdPerDay r = fee_revenue(g, curve, cap);
        // Ties resolve to the lower rate.
        if (r > best.max_revenue || (r == best.max_revenue && g < best.gamma_min)) best = {g, r};
    }
    return best;
}

FeeEquilibrium fee_only_equilibrium(const TabulatedDemand& curve, const CapacityParams& cap, const MinerUnit& unit,
                                    const ReliabilityFloor& floor) {
    return equilibrium_from(optimal_fee_rate(curve, cap), unit, floor);
}

}  // namespace btcecon
