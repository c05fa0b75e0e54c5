#include "nemsizer/report.hpp"

#include "nemsizer/dispatch.hpp"
#include "parallel.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace nemsizer
{
    namespace
    {
        using nlohmann::ordered_json;

        /// Rounded to nine significant digits; non-finite values become null.
        ordered_json
        num(double v)
        {
            if (!std::isfinite(v))
            {
                return nullptr;
            }
            return std::strtod(format_number(v).c_str(), nullptr);
        }

        ordered_json
        num(std::optional<double> v)
        {
            return v ? num(*v) : ordered_json(nullptr);
        }

        std::string
        dump(ordered_json const& j)
        {
            return j.dump(2) + "\n";
        }

        /// Header plus rows, all fields already formatted.
        std::string
        csv(std::vector<std::string> const& header, std::vector<std::vector<std::string>> const& rows)
        {
            std::ostringstream os;
            auto line = [&](std::vector<std::string> const& fields) {
                for (std::size_t i = 0; i < fields.size(); ++i)
                {
                    os << (i ? "," : "") << fields[i];
                }
                os << '\n';
            };
            line(header);
            for (auto const& r : rows)
            {
                line(r);
            }
            return os.str();
        }

        /// CSV or JSON array of records sharing one header.
        std::string
        table(Format format,
              std::vector<std::string> const& header,
              std::vector<std::vector<ordered_json>> const& rows)
        {
            if (format == Format::Json)
            {
                auto arr = ordered_json::array();
                for (auto const& r : rows)
                {
                    ordered_json obj = ordered_json::object();
                    for (std::size_t i = 0; i < header.size(); ++i)
                    {
                        obj[header[i]] = r[i];
                    }
                    arr.push_back(std::move(obj));
                }
                return dump(arr);
            }
            std::vector<std::vector<std::string>> text;
            for (auto const& r : rows)
            {
                std::vector<std::string> fields;
                for (auto const& v : r)
                {
                    if (v.is_null())
                    {
                        fields.emplace_back("nan");
                    }
                    else if (v.is_string())
                    {
                        fields.push_back(v.get<std::string>());
                    }
                    else if (v.is_boolean())
                    {
                        fields.emplace_back(v.get<bool>() ? "1" : "0");
                    }
                    else if (v.is_number_float())
                    {
                        fields.push_back(format_number(v.get<double>()));
                    }
                    else
                    {
                        fields.push_back(v.dump());
                    }
                }
                text.push_back(std::move(fields));
            }
            return csv(header, text);
        }

        ordered_json
        label(std::string_view s)
        {
            return std::string{s};
        }

        std::string_view
        column_name(Parameter::Kind k)
        {
            switch (k)
            {
                case Parameter::Kind::ImportPrice:
                    return "import_price";
                case Parameter::Kind::ExportPrice:
                    return "export_price";
                case Parameter::Kind::PvCost:
                    return "pv_cost";
            }
            return "unknown";
        }
    }

    std::string
    tariff_report(ValidatedSchedule const& schedule, Format format)
    {
        std::vector<std::vector<ordered_json>> rows;
        for (auto const& p : schedule.periods())
        {
            rows.push_back({label(p.name), num(p.price.import_price), num(p.price.export_price),
                            p.repaired});
        }
        return table(format, {"period_id", "import_price", "export_price", "repaired"}, rows);
    }

    std::string
    calibration_report(Scenario const& scenario, Format format)
    {
        std::vector<std::vector<ordered_json>> rows;
        for (std::size_t t = 0; t < scenario.size(); ++t)
        {
            auto const& pm = scenario.period(t);
            bool const normal = pm.cf.kind() == CapacityFactorDist::Kind::ClippedNormal;
            rows.push_back({label(scenario.schedule().periods()[t].name), num(pm.utility.a()),
                            num(pm.utility.b()), num(normal ? pm.cf.mu() : pm.cf.value()),
                            num(pm.cf.sigma()), num(pm.cf.psi_max())});
        }
        return table(format, {"period_id", "a", "b", "mean_cf", "cf_sigma", "cf_max"}, rows);
    }

    std::string
    dispatch_report(Scenario const& scenario, double g, Format format)
    {
        std::vector<std::vector<ordered_json>> rows;
        for (std::size_t t = 0; t < scenario.size(); ++t)
        {
            auto const e = expected_period_quantities(scenario, t, g);
            rows.push_back({label(scenario.schedule().periods()[t].name), num(e.regimes.import),
                            num(e.regimes.net_zero), num(e.regimes.exported), num(e.consumption),
                            num(e.imported), num(e.exported), num(e.payment)});
        }
        return table(format,
                     {"period_id", "p_import", "p_netzero", "p_export", "e_consumption",
                      "e_import", "e_export", "e_payment"},
                     rows);
    }

    std::string
    size_report(InvestmentResult const& r, Format format)
    {
        if (format == Format::Json)
        {
            ordered_json j;
            j["g_star"] = num(r.g_star);
            j["classification"] = label(to_string(r.classification));
            j["interval"] = {num(r.lo), num(r.hi)};
            j["F_at_gstar"] = num(r.F_at_gstar);
            j["c_g"] = num(r.c_g);
            j["flat_bound"] = num(r.flat_bound);
            j["g_max"] = num(r.g_max);
            j["F0"] = num(r.F0);
            j["F_gmax"] = num(r.F_gmax);
            j["g_dagger"] = num(r.g_dagger);
            return dump(j);
        }
        return table(format,
                     {"g_star", "classification", "interval_lo", "interval_hi", "F_at_gstar",
                      "c_g", "flat_bound", "g_max", "F0", "F_gmax"},
                     {{num(r.g_star), label(to_string(r.classification)), num(r.lo), num(r.hi),
                       num(r.F_at_gstar), num(r.c_g), num(r.flat_bound), num(r.g_max), num(r.F0),
                       num(r.F_gmax)}});
    }

    std::string
    curve_report(std::vector<std::pair<double, double>> const& curve, Format format)
    {
        std::vector<std::vector<ordered_json>> rows;
        for (auto const& [g, f] : curve)
        {
            rows.push_back({num(g), num(f)});
        }
        return table(format, {"g", "F"}, rows);
    }

    std::vector<SensitivityEntry>
    sensitivity_entries(Scenario const& scenario, unsigned jobs)
    {
        std::vector<Parameter> params;
        for (std::size_t t = 0; t < scenario.size(); ++t)
        {
            params.push_back(Parameter::import_price(t));
            params.push_back(Parameter::export_price(t));
        }
        params.push_back(Parameter::pv_cost());

        std::vector<SensitivityEntry> out(params.size());
        detail::parallel_for(params.size(), jobs, [&](std::size_t i) {
            auto const& p = params[i];
            double const h = p.kind == Parameter::Kind::PvCost ? 1e-3 : 1e-4;
            SolveOptions tight;
            tight.rel_gtol = 1e-13;
            auto& e = out[i];
            e.dg = dg_dparam(scenario, scenario.c_g(), scenario.g_max(), p);
            e.fd_check = fd_dg(scenario, scenario.c_g(), scenario.g_max(), p, h, tight);
            e.net_demand = net_demand_derivative(scenario, scenario.c_g(), scenario.g_max(), p);
            e.payment = payment_derivative(scenario, scenario.c_g(), scenario.g_max(), p);
        });
        return out;
    }

    std::string
    sensitivity_report(std::vector<SensitivityEntry> const& entries, Format format)
    {
        std::vector<std::string> const header{
            "parameter", "case", "value", "left", "right", "fd_check", "infinite_sensitivity",
            "net_demand_direct", "net_demand_pv", "net_demand_total", "payment_direct",
            "payment_pv", "payment_total"};
        std::vector<std::vector<ordered_json>> rows;
        for (auto const& e : entries)
        {
            // Totals for an increase of the parameter.
            auto const& nd = e.net_demand.right;
            auto const& pay = e.payment.right;
            rows.push_back({label(to_string(e.dg.parameter)), label(to_string(e.dg.derivative_case)),
                            num(e.dg.value), num(e.dg.left_value), num(e.dg.right_value),
                            num(e.fd_check), e.dg.infinite_sensitivity, num(nd.direct_sum()),
                            num(nd.pv_sum()), num(nd.total_sum()), num(pay.direct_sum()),
                            num(pay.pv_sum()), num(pay.total_sum())});
        }
        return table(format, header, rows);
    }

    std::string
    sign_table_report(SignTable const& t, Format format)
    {
        std::vector<std::vector<ordered_json>> rows;
        for (auto const& c : t.cells)
        {
            std::string status = "reported";
            if (c.asserted())
            {
                status = c.passed() ? "pass" : "fail";
            }
            else if (c.expected != Sign::Indeterminate)
            {
                status = "excluded";
            }
            rows.push_back({label(to_string(c.row)), label(column_name(c.column)),
                            label(to_string(c.regime)), label(to_string(c.expected)),
                            c.empirical ? label(to_string(*c.empirical)) : label("none"),
                            num(c.difference), num(c.psi), label(status),
                            label(c.note.empty() ? "-" : c.note)});
        }
        return table(format,
                     {"variable", "parameter", "regime", "expected", "empirical", "difference",
                      "psi", "status", "note"},
                     rows);
    }

    std::string
    sweep_report(SweepGrid const& grid, Format format)
    {
        if (format == Format::Csv)
        {
            std::ostringstream os;
            write_sweep_csv(os, grid);
            return os.str();
        }
        std::vector<std::vector<ordered_json>> rows;
        for (auto const& r : grid.rows)
        {
            rows.push_back({num(r.dpi_plus), num(r.dpi_minus), num(r.g_star),
                            num(r.net_demand_endog), num(r.net_demand_fixed),
                            num(r.payment_endog), num(r.payment_fixed), r.valid});
        }
        return table(format,
                     {"dpi_plus", "dpi_minus", "g_star", "net_demand_endog", "net_demand_fixed",
                      "payment_endog", "payment_fixed", "valid_flag"},
                     rows);
    }
}
