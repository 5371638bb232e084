#include "btcecon/cli.hpp"
#include "btcecon/core_model.hpp"
#include "btcecon/errors.hpp"
#include "btcecon/fee_market.hpp"
#include "btcecon/issuance.hpp"
#include "btcecon/oligopoly.hpp"
#include "btcecon/timeseries.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <sstream>

namespace py = pybind11;
using namespace btcecon;

namespace {

// Accepts datetime.date / datetime.datetime / "YYYY-MM-DD".
Date to_date(const py::object& obj) {
    if (py::isinstance<py::str>(obj)) return parse_date(obj.cast<std::string>());
    if (py::hasattr(obj, "isoformat")) return parse_date(obj.attr("isoformat")().cast<std::string>().substr(0, 10));
    throw ValidationError("expected a date or an ISO-8601 string");
}

py::object to_py_date(Date d) {
    return py::module_::import("datetime").attr("date").attr("fromisoformat")(format_date(d));
}

template <class Q>
Path<Q> to_path(const py::object& obj) {
    if (PyCallable_Check(obj.ptr())) {
        py::function fn = obj.cast<py::function>();
        return [fn](Date d) {
            return Q(fn(to_py_date(d)).template cast<double>());
        };
    }
    return constant_path(Q(obj.cast<double>()));
}

py::list dated(const std::vector<DatedValue>& rows) {
    py::list out;
    for (const auto& r : rows) out.append(py::make_tuple(to_py_date(r.date), r.value));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bitcoin mining and fee-market economics";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ComputationError>(m, "ComputationError", base.ptr());

    // core model
    py::class_<MinerUnit>(m, "MinerUnit")
        .def(py::init([](double power_kw, double electricity, double hashrate) {
                 return MinerUnit(Kilowatts(power_kw), UsdPerKwh(electricity), ThPerS(hashrate));
             }),
             py::arg("power_kw"), py::arg("electricity_usd_per_kwh"),
             py::arg("unit_hashrate_th_per_s") = MinerUnit::kDefaultHashrate)
        .def_property_readonly("power_kw", [](const MinerUnit& u) { return u.power().value(); })
        .def_property_readonly("electricity_usd_per_kwh", [](const MinerUnit& u) { return u.electricity().value(); })
        .def_property_readonly("unit_hashrate_th_per_s", [](const MinerUnit& u) { return u.hashrate().value(); });

    py::class_<MarketState>(m, "MarketState")
        .def(py::init([](double x, double fees, double br, double h) {
                 return MarketState(UsdPerBtc(x), UsdPerDay(fees), BtcPerDay(br), ThPerS(h));
             }),
             py::arg("exchange_rate_usd_per_btc"), py::arg("fees_usd_per_day"), py::arg("block_reward_btc_per_day"),
             py::arg("hashrate_th_per_s"))
        .def_property_readonly("exchange_rate_usd_per_btc", [](const MarketState& s) { return s.exchange_rate().value(); })
        .def_property_readonly("fees_usd_per_day", [](const MarketState& s) { return s.fees().value(); })
        .def_property_readonly("block_reward_btc_per_day", [](const MarketState& s) { return s.block_reward().value(); })
        .def_property_readonly("hashrate_th_per_s", [](const MarketState& s) { return s.hashrate().value(); });

    m.def("revenue_bundle", [](const MarketState& s) { return revenue_bundle(s).value(); });
    m.def("daily_energy_cost", [](const MinerUnit& u) { return daily_energy_cost(u).value(); });
    m.def("marginal_revenue", [](const MarketState& s, const MinerUnit& u) { return marginal_revenue(s, u).value(); });
    m.def("marginal_profit", [](const MarketState& s, const MinerUnit& u) { return marginal_profit(s, u).value(); });
    m.def("competitive_equilibrium_hashrate",
          [](double revenue, const MinerUnit& u) { return competitive_equilibrium_hashrate(UsdPerDay(revenue), u).value(); },
          py::arg("revenue_usd_per_day"), py::arg("unit"));
    m.def("supply_after_electricity_shock",
          [](const MarketState& s, const MinerUnit& u, double new_p) {
              return supply_after_electricity_shock(s, u, UsdPerKwh(new_p)).value();
          },
          py::arg("state"), py::arg("unit"), py::arg("new_electricity_usd_per_kwh"));

    // oligopoly
    py::class_<OligopolyConfig>(m, "OligopolyConfig")
        .def(py::init([](std::vector<double> shares, double revenue, const MinerUnit& u) {
                 return OligopolyConfig(std::move(shares), UsdPerDay(revenue), u);
             }),
             py::arg("shares"), py::arg("revenue_usd_per_day"), py::arg("unit"))
        .def_property_readonly("shares", &OligopolyConfig::shares)
        .def_property_readonly("revenue_usd_per_day", [](const OligopolyConfig& c) { return c.revenue().value(); });

    m.def("firm_profit",
          [](const OligopolyConfig& c, double h, std::size_t i) { return firm_profit(c, ThPerS(h), i).value(); },
          py::arg("config"), py::arg("hashrate_th_per_s"), py::arg("firm"));
    m.def("marginal_delta_adding_unit",
          [](const OligopolyConfig& c, double h, std::size_t adder) {
              std::vector<double> out;
              for (auto d : marginal_delta_adding_unit(c, ThPerS(h), adder)) out.push_back(d.value());
              return out;
          },
          py::arg("config"), py::arg("hashrate_th_per_s"), py::arg("adder"));
    m.def("symmetric_equilibrium",
          [](std::size_t n, double revenue, const MinerUnit& u) {
              const auto eq = symmetric_equilibrium(n, UsdPerDay(revenue), u);
              return py::make_tuple(eq.hashrate.value(), eq.per_firm_profit.value());
          },
          py::arg("n"), py::arg("revenue_usd_per_day"), py::arg("unit"),
          "Returns (hashrate_th_per_s, per_firm_profit_usd_per_day).");
    m.def("best_response_dynamics",
          [](std::size_t n, double revenue, const MinerUnit& u, double start, std::uint64_t max_iters, bool full_trace) {
              const auto res = best_response_dynamics(n, UsdPerDay(revenue), u, ThPerS(start), max_iters,
                                                      full_trace ? TraceMode::full : TraceMode::compressed);
              py::list trace;
              for (const auto& s : res.trace)
                  trace.append(py::make_tuple(s.iteration, s.firm ? py::cast(*s.firm) : py::none(),
                                              s.hashrate.value(), s.delta.value(), s.units));
              py::dict d;
              d["hashrate"] = res.hashrate.value();
              d["shares"] = res.shares;
              d["units_added"] = res.units_added;
              d["iterations"] = res.iterations;
              d["trace"] = trace;
              return d;
          },
          py::arg("n"), py::arg("revenue_usd_per_day"), py::arg("unit"), py::arg("start_hashrate_th_per_s") = 0.0,
          py::arg("max_iters") = std::uint64_t{1'000'000'000'000ULL}, py::arg("full_trace") = false);

    // issuance
    py::class_<IssuanceParams>(m, "IssuanceParams")
        .def(py::init<>())
        .def_readwrite("initial_subsidy_btc_per_block", &IssuanceParams::initial_subsidy_btc_per_block)
        .def_readwrite("halving_interval_years", &IssuanceParams::halving_interval_years)
        .def_readwrite("halving_interval_blocks", &IssuanceParams::halving_interval_blocks)
        .def_readwrite("blocks_per_day", &IssuanceParams::blocks_per_day)
        .def_property(
            "genesis", [](const IssuanceParams& p) { return to_py_date(p.genesis); },
            [](IssuanceParams& p, const py::object& d) { p.genesis = to_date(d); })
        .def_property(
            "clock", [](const IssuanceParams& p) { return p.clock == EpochClock::calendar ? "calendar" : "block-height"; },
            [](IssuanceParams& p, const std::string& c) {
                if (c == "calendar")
                    p.clock = EpochClock::calendar;
                else if (c == "block-height")
                    p.clock = EpochClock::block_height;
                else
                    throw ValidationError("clock must be 'calendar' or 'block-height'");
            })
        .def("validate", &IssuanceParams::validate);

    py::class_<Epoch>(m, "Epoch")
        .def_readonly("index", &Epoch::index)
        .def_readonly("subsidy_btc_per_block", &Epoch::subsidy_btc_per_block)
        .def_property_readonly("daily_reward_btc", [](const Epoch& e) { return e.daily_reward.value(); });

    m.def("epoch_at", &epoch_at, py::arg("index"), py::arg("params") = IssuanceParams{});
    m.def("epoch_of", [](const py::object& d, const IssuanceParams& p) { return epoch_of(to_date(d), p); },
          py::arg("date"), py::arg("params") = IssuanceParams{});
    m.def("reward_ratio", &reward_ratio, py::arg("earlier"), py::arg("later"));
    m.def("revenue_projection",
          [](const py::object& start, double years, const py::object& x, const py::object& fees,
             const IssuanceParams& p) {
              const auto rows =
                  revenue_projection(to_date(start), years, to_path<UsdPerBtc>(x), to_path<UsdPerDay>(fees), p);
              py::list out;
              for (const auto& r : rows)
                  out.append(py::make_tuple(to_py_date(r.date), r.block_reward_usd.value(), r.fees_usd.value(),
                                            r.fee_share));
              return out;
          },
          py::arg("start"), py::arg("horizon_years"), py::arg("exchange_rate"), py::arg("fees"),
          py::arg("params") = IssuanceParams{},
          "exchange_rate and fees are constants or callables taking a datetime.date. "
          "Rows are (date, block_reward_usd, fees_usd, fee_share).");

    // fee market
    py::class_<DemandCurve>(m, "DemandCurve")
        .def(py::init<double, double, double>(), py::arg("scale"), py::arg("elasticity"), py::arg("mean_tx_value_usd"))
        .def_property_readonly("scale", &DemandCurve::scale)
        .def_property_readonly("elasticity", &DemandCurve::elasticity)
        .def_property_readonly("mean_tx_value_usd", &DemandCurve::mean_tx_value_usd);

    py::class_<CapacityParams>(m, "CapacityParams")
        .def(py::init<>())
        .def(py::init<int, double, double>(), py::arg("blocks_per_day"), py::arg("block_size_bytes"),
             py::arg("avg_tx_size_bytes"))
        .def_property_readonly("max_transactions", &CapacityParams::max_transactions);

    py::class_<TabulatedDemand>(m, "TabulatedDemand")
        .def(py::init<std::vector<std::pair<double, double>>, double>(), py::arg("points"),
             py::arg("mean_tx_value_usd"))
        .def_static("load_csv", [](const std::string& path, double v) { return TabulatedDemand::load_csv(path, v); },
                    py::arg("path"), py::arg("mean_tx_value_usd"));

    m.def("demand", py::overload_cast<double, const DemandCurve&, const CapacityParams&>(&demand), py::arg("gamma"),
          py::arg("curve"), py::arg("capacity") = CapacityParams{});
    m.def("demand", py::overload_cast<double, const TabulatedDemand&, const CapacityParams&>(&demand),
          py::arg("gamma"), py::arg("curve"), py::arg("capacity") = CapacityParams{});
    m.def("fee_revenue",
          [](double g, const DemandCurve& c, const CapacityParams& cap) { return fee_revenue(g, c, cap).value(); },
          py::arg("gamma"), py::arg("curve"), py::arg("capacity") = CapacityParams{});
    m.def("fee_revenue",
          [](double g, const TabulatedDemand& c, const CapacityParams& cap) { return fee_revenue(g, c, cap).value(); },
          py::arg("gamma"), py::arg("curve"), py::arg("capacity") = CapacityParams{});
    m.def("optimal_fee_rate",
          [](const DemandCurve& c, const CapacityParams& cap) {
              const auto o = optimal_fee_rate(c, cap);
              return py::make_tuple(o.gamma_min, o.max_revenue.value());
          },
          py::arg("curve"), py::arg("capacity") = CapacityParams{});
    m.def("optimal_fee_rate",
          [](const TabulatedDemand& c, const CapacityParams& cap) {
              const auto o = optimal_fee_rate(c, cap);
              return py::make_tuple(o.gamma_min, o.max_revenue.value());
          },
          py::arg("curve"), py::arg("capacity") = CapacityParams{});
    auto equilibrium_dict = [](const FeeEquilibrium& e) {
        py::dict d;
        d["gamma_min"] = e.gamma_min;
        d["max_revenue"] = e.max_revenue.value();
        d["hashrate"] = e.hashrate.value();
        d["secure"] = e.secure;
        return d;
    };
    m.def("fee_only_equilibrium",
          [equilibrium_dict](const DemandCurve& c, const CapacityParams& cap, const MinerUnit& u, double floor) {
              return equilibrium_dict(fee_only_equilibrium(c, cap, u, ReliabilityFloor{ThPerS(floor)}));
          },
          py::arg("curve"), py::arg("capacity"), py::arg("unit"), py::arg("critical_hashrate_th_per_s") = 0.0);
    m.def("fee_only_equilibrium",
          [equilibrium_dict](const TabulatedDemand& c, const CapacityParams& cap, const MinerUnit& u, double floor) {
              return equilibrium_dict(fee_only_equilibrium(c, cap, u, ReliabilityFloor{ThPerS(floor)}));
          },
          py::arg("curve"), py::arg("capacity"), py::arg("unit"), py::arg("critical_hashrate_th_per_s") = 0.0);

    // time series
    py::class_<Series>(m, "Series")
        .def_readonly("label", &Series::label)
        .def("__len__", [](const Series& s) { return s.records.size(); })
        .def("gaps", &Series::gaps)
        .def_property_readonly("dates",
                               [](const Series& s) {
                                   py::list out;
                                   for (const auto& r : s.records) out.append(to_py_date(r.date));
                                   return out;
                               })
        .def_property_readonly("prices", [](const Series& s) {
            std::vector<double> out;
            for (const auto& r : s.records) out.push_back(r.price_usd);
            return out;
        });

    m.def("load_csv",
          [](const std::string& path, const std::map<std::string, std::string>& columns) {
              ColumnMapping mapping;
              for (const auto& [field, column] : columns) {
                  if (field == "date") mapping.date = column;
                  else if (field == "price_usd") mapping.price_usd = column;
                  else if (field == "fees_usd_per_day") mapping.fees_usd_per_day = column;
                  else if (field == "median_fee_usd") mapping.median_fee_usd = column;
                  else if (field == "block_reward_btc_per_day") mapping.block_reward_btc_per_day = column;
                  else if (field == "hashrate_th_per_s") mapping.hashrate_th_per_s = column;
                  else throw ValidationError("unknown column field '" + field + "'");
              }
              return load_csv(path, mapping).series;
          },
          py::arg("path"), py::arg("columns") = std::map<std::string, std::string>{});
    m.def("write_csv", [](const Series& s) {
        std::ostringstream out;
        write_csv(out, s);
        return out.str();
    });
    m.def("profitability_series",
          [](const Series& s, const MinerUnit& u) { return dated(profitability_series(s, u).points); });
    m.def("rolling_mean", [](const std::vector<double>& values, std::size_t window) {
        std::vector<DatedValue> in;
        in.reserve(values.size());
        for (double v : values) in.push_back({Date{}, v});
        std::vector<std::optional<double>> out;
        for (const auto& r : rolling_mean(in, window)) out.push_back(r.value);
        return out;
    });
    m.def("log_returns", [](const Series& s) { return dated(log_returns(s).returns); });
    m.def("windowed_correlation",
          [](const Series& a, const Series& b, std::size_t window, const std::string& mode) {
              WindowMode wm = WindowMode::non_overlapping;
              if (mode == "sliding")
                  wm = WindowMode::sliding;
              else if (mode != "non-overlapping")
                  throw ValidationError("mode must be 'non-overlapping' or 'sliding'");
              py::list out;
              for (const auto& w : windowed_correlation(a, b, window, wm)) {
                  py::dict d;
                  d["start"] = to_py_date(w.start);
                  d["end"] = to_py_date(w.end);
                  d["pairs"] = w.pairs;
                  d["rho"] = w.rho ? py::cast(*w.rho) : py::none();
                  d["reason"] = w.reason;
                  out.append(d);
              }
              return out;
          },
          py::arg("a"), py::arg("b"), py::arg("window_days") = 100, py::arg("mode") = "non-overlapping");

    m.def("run_cli",
          [](const std::vector<std::string>& args) {
              std::ostringstream out, err;
              const int code = cli::run(args, out, err);
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Runs the command-line tool in-process. Returns (exit_code, stdout, stderr).");
}
