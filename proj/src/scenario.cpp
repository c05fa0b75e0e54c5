#include "nemsizer/scenario.hpp"

#include "csv.hpp"
#include "nemsizer/dispatch.hpp"
#include "nemsizer/errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>

namespace nemsizer
{
    namespace
    {
        constexpr std::array<int, 12> kDaysInMonth{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

        void
        check_record(HourlyRecord const& r, std::string const& where)
        {
            if (r.month < 1 || r.month > 12)
            {
                throw ValidationError(where + ": month must be 1..12");
            }
            if (r.day < 1 || r.day > 31)
            {
                throw ValidationError(where + ": day must be 1..31");
            }
            if (r.hour < 0 || r.hour > 23)
            {
                throw ValidationError(where + ": hour must be 0..23");
            }
            if (!(r.demand_kwh >= 0.0) || !std::isfinite(r.demand_kwh))
            {
                throw ValidationError(where + ": demand must be finite and non-negative");
            }
            if (!(r.capacity_factor >= 0.0 && r.capacity_factor <= 1.0))
            {
                throw ValidationError(where + ": capacity factor must lie in [0, 1]");
            }
        }

        std::ifstream
        open_input(std::string const& path)
        {
            std::ifstream in{path};
            if (!in)
            {
                throw ValidationError("cannot open '" + path + "'");
            }
            return in;
        }

        std::optional<std::size_t>
        parse_index(std::string const& s)
        {
            std::size_t v = 0;
            auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || ptr != s.data() + s.size())
            {
                return std::nullopt;
            }
            return v;
        }
    }

    std::vector<PeriodAggregate>
    aggregate(std::vector<HourlyRecord> const& records, ValidatedSchedule const& schedule)
    {
        std::size_t const n = schedule.period_count();
        std::vector<double> demand(n, 0.0);
        std::vector<double> cf(n, 0.0);
        std::vector<std::size_t> count(n, 0);
        for (std::size_t i = 0; i < records.size(); ++i)
        {
            auto const& r = records[i];
            check_record(r, "record " + std::to_string(i));
            auto const t = schedule.assign(r.month, r.hour).index;
            demand[t] += r.demand_kwh;
            cf[t] += r.capacity_factor;
            ++count[t];
        }
        std::vector<PeriodAggregate> out(n);
        for (std::size_t t = 0; t < n; ++t)
        {
            auto const& name = schedule.periods()[t].name;
            if (count[t] == 0)
            {
                throw ValidationError("period " + name + " has no hourly records");
            }
            out[t].period_id = name;
            out[t].d0_kwh = demand[t];
            out[t].mean_cf = cf[t] / static_cast<double>(count[t]);
            out[t].hours = static_cast<double>(count[t]);
        }
        return out;
    }

    void
    apply_sigma_by_month(
        std::vector<PeriodAggregate>& aggregates,
        std::vector<HourlyRecord> const& records,
        ValidatedSchedule const& schedule,
        std::array<double, 12> const& sigma_by_month)
    {
        if (aggregates.size() != schedule.period_count())
        {
            throw ValidationError("one aggregate per period is required");
        }
        for (double s : sigma_by_month)
        {
            if (!(s > 0.0) || !std::isfinite(s))
            {
                throw ValidationError("monthly capacity-factor sigma must be positive");
            }
        }
        std::vector<double> sum(aggregates.size(), 0.0);
        std::vector<double> count(aggregates.size(), 0.0);
        for (auto const& r : records)
        {
            auto const t = schedule.assign(r.month, r.hour).index;
            sum[t] += sigma_by_month[static_cast<std::size_t>(r.month - 1)];
            count[t] += 1.0;
        }
        for (std::size_t t = 0; t < aggregates.size(); ++t)
        {
            if (count[t] == 0.0)
            {
                throw ValidationError(
                    "period " + schedule.periods()[t].name + " has no hourly records");
            }
            aggregates[t].sigma = sum[t] / count[t];
        }
    }

    std::array<double, 12>
    default_sigma_by_month()
    {
        std::array<double, 12> out{};
        for (int m = 0; m < 12; ++m)
        {
            out[static_cast<std::size_t>(m)] =
                0.125 + 0.075 * std::cos(2.0 * std::numbers::pi * m / 12.0);
        }
        return out;
    }

    double
    amortized_cost(double capex, double annual_rate, int n_months, double credit_fraction)
    {
        if (!(capex >= 0.0) || !std::isfinite(capex))
        {
            throw ValidationError("capital cost must be finite and non-negative");
        }
        if (!(annual_rate >= 0.0) || !std::isfinite(annual_rate))
        {
            throw ValidationError("interest rate must be finite and non-negative");
        }
        if (n_months <= 0)
        {
            throw ValidationError("loan term must be a positive number of months");
        }
        if (!(credit_fraction >= 0.0) || !std::isfinite(credit_fraction))
        {
            throw ValidationError("credit fraction must be finite and non-negative");
        }
        double const n = n_months;
        if (annual_rate == 0.0)
        {
            return credit_fraction * 12.0 * capex / n;
        }
        double const r = annual_rate / 12.0;
        return credit_fraction * 12.0 * capex * r / (1.0 - std::pow(1.0 + r, -n));
    }

    std::vector<HourlyRecord>
    synth_generate(std::uint64_t seed, SynthParams const& p)
    {
        CounterRng rng{seed};
        std::normal_distribution<double> normal{0.0, 1.0};
        double const lat = p.latitude_deg * std::numbers::pi / 180.0;
        double const two_pi = 2.0 * std::numbers::pi;

        std::vector<HourlyRecord> out;
        out.reserve(static_cast<std::size_t>(p.year_days) * 24);
        int doy = 0;
        for (int month = 1; month <= 12 && doy < p.year_days; ++month)
        {
            for (int day = 1; day <= kDaysInMonth[static_cast<std::size_t>(month - 1)]
                              && doy < p.year_days;
                 ++day, ++doy)
            {
                double const n = doy + 1;
                double const decl =
                    23.44 * std::numbers::pi / 180.0 * std::sin(two_pi * (284.0 + n) / 365.0);
                double const clearness = std::clamp(
                    p.cloud_mean + p.cloud_sd * normal(rng), p.cloud_floor, 1.0);
                // Heating and cooling peaks near mid-January and mid-July.
                double const season = p.seasonal_kwh * std::abs(std::cos(two_pi * (n - 15.0) / 365.0));
                for (int hour = 0; hour < 24; ++hour)
                {
                    double const omega = (hour + 0.5 - 12.0) * 15.0 * std::numbers::pi / 180.0;
                    double const cos_zenith = std::sin(lat) * std::sin(decl)
                                            + std::cos(lat) * std::cos(decl) * std::cos(omega);
                    double const cf = std::clamp(
                        std::max(0.0, cos_zenith) * p.clear_sky_cf * clearness, 0.0, 1.0);

                    auto bump = [&](double height, double centre, double width) {
                        double const z = (hour + 0.5 - centre) / width;
                        return height * std::exp(-0.5 * z * z);
                    };
                    double const demand = std::max(
                        0.05,
                        p.base_kwh + season + bump(p.evening_kwh, p.evening_hour, p.evening_width)
                            + bump(p.morning_kwh, p.morning_hour, 1.5)
                            + p.noise_kwh * normal(rng));
                    out.push_back({month, day, hour, demand, cf});
                }
            }
        }
        return out;
    }

    Scenario
    build_scenario(
        std::vector<PeriodAggregate> const& aggregates,
        ValidatedSchedule const& schedule,
        BuildOptions const& options)
    {
        std::size_t const n = schedule.period_count();
        std::map<std::string, std::size_t> by_name;
        for (std::size_t t = 0; t < n; ++t)
        {
            by_name[schedule.periods()[t].name] = t;
        }

        std::vector<std::optional<PeriodModel>> slots(n);
        for (auto const& agg : aggregates)
        {
            std::size_t t = 0;
            if (auto it = by_name.find(agg.period_id); it != by_name.end())
            {
                t = it->second;
            }
            else if (auto idx = parse_index(agg.period_id); idx && *idx < n)
            {
                t = *idx;
            }
            else
            {
                throw ValidationError(
                    "aggregate period '" + agg.period_id + "' is not a period of tariff '"
                    + schedule.name() + "'");
            }
            if (slots[t])
            {
                throw ValidationError("period '" + agg.period_id + "' has two aggregate rows");
            }
            std::string const where = "period " + schedule.periods()[t].name;
            if (!(agg.d0_kwh >= 0.0) || !std::isfinite(agg.d0_kwh))
            {
                throw ValidationError(where + ": anchor demand must be non-negative");
            }
            if (!(agg.hours > 0.0) || !std::isfinite(agg.hours))
            {
                throw ValidationError(where + ": hours must be positive");
            }
            if (!(agg.mean_cf >= 0.0 && agg.mean_cf <= agg.psi_max))
            {
                throw ValidationError(where + ": mean capacity factor outside [0, psi_max]");
            }

            PeriodModel pm{
                QuadraticUtility::satiated(options.anchor_price * (1.0 - 1.0 / options.elasticity)),
                CapacityFactorDist::non_generating(),
                agg.hours,
                true,
            };
            if (agg.d0_kwh > 0.0)
            {
                pm.utility = calibrate(agg.d0_kwh, options.anchor_price, options.elasticity);
                pm.degenerate = false;
            }
            if (agg.mean_cf > 0.0)
            {
                if (!(agg.sigma > 0.0))
                {
                    throw ValidationError(where + ": capacity-factor sigma must be positive");
                }
                pm.cf = CapacityFactorDist::clipped_normal(agg.mean_cf, agg.sigma, agg.psi_max);
            }
            slots[t] = pm;
        }

        std::vector<PeriodModel> periods;
        periods.reserve(n);
        for (std::size_t t = 0; t < n; ++t)
        {
            if (!slots[t])
            {
                throw ValidationError(
                    "no aggregate row for period " + schedule.periods()[t].name);
            }
            periods.push_back(*slots[t]);
        }
        return Scenario{schedule, std::move(periods), options.c_g, options.g_max};
    }

    // CSV ----------------------------------------------------------------

    std::string
    format_number(double v)
    {
        if (v == 0.0)
        {
            v = 0.0; // drop the sign of negative zero
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.9g", v);
        return buf;
    }

    std::vector<HourlyRecord>
    read_hourly_csv(std::istream& in, std::string const& source)
    {
        detail::CsvReader csv{in, source};
        csv.require({"month", "day", "hour", "demand_kwh", "capacity_factor"});
        std::vector<HourlyRecord> out;
        while (csv.next())
        {
            HourlyRecord r{
                csv.integer("month"),
                csv.integer("day"),
                csv.integer("hour"),
                csv.number("demand_kwh"),
                csv.number("capacity_factor"),
            };
            try
            {
                check_record(r, "record");
            }
            catch (ValidationError const& e)
            {
                csv.fail(e.what());
            }
            out.push_back(r);
        }
        return out;
    }

    std::vector<HourlyRecord>
    read_hourly_csv(std::string const& path)
    {
        auto in = open_input(path);
        return read_hourly_csv(in, path);
    }

    void
    write_hourly_csv(std::ostream& out, std::vector<HourlyRecord> const& records)
    {
        out << "month,day,hour,demand_kwh,capacity_factor\n";
        for (auto const& r : records)
        {
            out << r.month << ',' << r.day << ',' << r.hour << ',' << format_number(r.demand_kwh)
                << ',' << format_number(r.capacity_factor) << '\n';
        }
    }

    std::vector<PeriodAggregate>
    read_aggregates_csv(std::istream& in, std::string const& source)
    {
        detail::CsvReader csv{in, source};
        csv.require({"period_id", "d0_kwh", "mean_cf", "sigma", "psi_max"});
        bool const has_hours = csv.has("hours");
        std::vector<PeriodAggregate> out;
        while (csv.next())
        {
            PeriodAggregate a;
            a.period_id = csv.text("period_id");
            a.d0_kwh = csv.number("d0_kwh");
            a.mean_cf = csv.number("mean_cf");
            a.sigma = csv.number("sigma");
            a.psi_max = csv.number("psi_max");
            a.hours = has_hours ? csv.number("hours") : 1.0;
            if (a.period_id.empty())
            {
                csv.fail("empty period_id");
            }
            out.push_back(a);
        }
        return out;
    }

    std::vector<PeriodAggregate>
    read_aggregates_csv(std::string const& path)
    {
        auto in = open_input(path);
        return read_aggregates_csv(in, path);
    }

    void
    write_aggregates_csv(std::ostream& out, std::vector<PeriodAggregate> const& aggregates)
    {
        // Seventeen digits so that a re-read reproduces every value exactly.
        auto exact = [](double v) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return std::string{buf};
        };
        out << "period_id,d0_kwh,mean_cf,sigma,psi_max,hours\n";
        for (auto const& a : aggregates)
        {
            out << a.period_id << ',' << exact(a.d0_kwh) << ',' << exact(a.mean_cf) << ','
                << exact(a.sigma) << ',' << exact(a.psi_max) << ',' << exact(a.hours) << '\n';
        }
    }

    void
    write_calibration_csv(std::ostream& out, Scenario const& scenario)
    {
        out << "period_id,a,b,mean_cf,cf_sigma,cf_max\n";
        for (std::size_t t = 0; t < scenario.size(); ++t)
        {
            auto const& pm = scenario.period(t);
            bool const normal = pm.cf.kind() == CapacityFactorDist::Kind::ClippedNormal;
            out << scenario.schedule().periods()[t].name << ',' << format_number(pm.utility.a())
                << ',' << format_number(pm.utility.b()) << ','
                << format_number(normal ? pm.cf.mu() : pm.cf.value()) << ','
                << format_number(pm.cf.sigma()) << ',' << format_number(pm.cf.psi_max()) << '\n';
        }
    }

    // Sweeps -------------------------------------------------------------

    SweepGrid
    run_sweep(Scenario const& scenario, SweepSpec const& spec)
    {
        if (spec.grid_n < 2)
        {
            throw ValidationError("sweep grid needs at least two points per axis");
        }
        for (double v : {spec.dpi_plus_min, spec.dpi_plus_max, spec.dpi_minus_min, spec.dpi_minus_max})
        {
            if (!std::isfinite(v))
            {
                throw ValidationError("sweep ranges must be finite");
            }
        }

        SweepGrid grid;
        grid.grid_n = spec.grid_n;
        grid.g_fixed = solve_capacity(scenario, spec.solve).g_star;
        auto const n = static_cast<std::size_t>(spec.grid_n);
        grid.rows.resize(n * n);

        auto axis = [&](double lo, double hi, std::size_t i) {
            if (i + 1 == n)
            {
                return hi;
            }
            return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        };

        detail::parallel_for(n * n, spec.jobs, [&](std::size_t k) {
            SweepRow row;
            row.dpi_plus = axis(spec.dpi_plus_min, spec.dpi_plus_max, k / n);
            row.dpi_minus = axis(spec.dpi_minus_min, spec.dpi_minus_max, k % n);
            try
            {
                auto const s = scenario.with_schedule(
                    perturb(scenario.schedule(), row.dpi_plus, row.dpi_minus));
                row.g_star = solve_capacity(s, spec.solve).g_star;
                row.net_demand_endog = expected_net_demand(s, row.g_star);
                row.net_demand_fixed = expected_net_demand(s, grid.g_fixed);
                row.payment_endog = expected_payment(s, row.g_star);
                row.payment_fixed = expected_payment(s, grid.g_fixed);
                row.valid = true;
            }
            catch (ValidationError const&)
            {
                double const nan = std::numeric_limits<double>::quiet_NaN();
                row.g_star = nan;
                row.net_demand_endog = nan;
                row.net_demand_fixed = nan;
                row.payment_endog = nan;
                row.payment_fixed = nan;
                row.valid = false;
            }
            grid.rows[k] = row;
        });
        return grid;
    }

    void
    write_sweep_csv(std::ostream& out, SweepGrid const& grid)
    {
        out << "dpi_plus,dpi_minus,g_star,net_demand_endog,net_demand_fixed,payment_endog,"
               "payment_fixed,valid_flag\n";
        for (auto const& r : grid.rows)
        {
            out << format_number(r.dpi_plus) << ',' << format_number(r.dpi_minus) << ','
                << format_number(r.g_star) << ',' << format_number(r.net_demand_endog) << ','
                << format_number(r.net_demand_fixed) << ',' << format_number(r.payment_endog)
                << ',' << format_number(r.payment_fixed) << ',' << (r.valid ? 1 : 0) << '\n';
        }
    }

    SweepGrid
    read_sweep_csv(std::istream& in, std::string const& source)
    {
        detail::CsvReader csv{in, source};
        csv.require({"dpi_plus", "dpi_minus", "g_star", "net_demand_endog", "net_demand_fixed",
                     "payment_endog", "payment_fixed", "valid_flag"});
        SweepGrid grid;
        while (csv.next())
        {
            SweepRow r;
            r.dpi_plus = csv.number("dpi_plus");
            r.dpi_minus = csv.number("dpi_minus");
            r.g_star = csv.number("g_star");
            r.net_demand_endog = csv.number("net_demand_endog");
            r.net_demand_fixed = csv.number("net_demand_fixed");
            r.payment_endog = csv.number("payment_endog");
            r.payment_fixed = csv.number("payment_fixed");
            r.valid = csv.integer("valid_flag") != 0;
            grid.rows.push_back(r);
        }
        auto const side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(grid.rows.size()))));
        if (side * side != static_cast<int>(grid.rows.size()))
        {
            throw ValidationError(source + ": sweep rows do not form a square grid");
        }
        grid.grid_n = side;
        return grid;
    }
}
