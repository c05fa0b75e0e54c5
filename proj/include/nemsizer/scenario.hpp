#pragma once

#include "nemsizer/model.hpp"
#include "nemsizer/sizing.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nemsizer
{
    struct HourlyRecord
    {
        int month = 1; // 1..12
        int day = 1;   // 1..31
        int hour = 0;  // 0..23
        double demand_kwh = 0.0;
        double capacity_factor = 0.0;
    };

    /// Per-period inputs for calibration.
    struct PeriodAggregate
    {
        std::string period_id;
        double d0_kwh = 0.0;   // total demand over the period's hours
        double mean_cf = 0.0;  // mean capacity factor over the period's hours
        double sigma = 0.0;    // standard deviation of the capacity factor
        double psi_max = 1.0;  // upper clipping bound
        double hours = 1.0;    // number of hours the period spans
    };

    /// Groups records into the schedule's settlement periods. `sigma` is left
    /// at zero; callers fill it from a month schedule or their own data.
    /// Throws ValidationError on malformed records or an empty period.
    std::vector<PeriodAggregate> aggregate(
        std::vector<HourlyRecord> const& records, ValidatedSchedule const& schedule);

    /// Applies a per-month standard deviation to month-keyed periods, or the
    /// hour-weighted mean of the months a period spans otherwise.
    void apply_sigma_by_month(
        std::vector<PeriodAggregate>& aggregates,
        std::vector<HourlyRecord> const& records,
        ValidatedSchedule const& schedule,
        std::array<double, 12> const& sigma_by_month);

    /// Placeholder month schedule from 0.20 in January down to 0.05 in July.
    std::array<double, 12> default_sigma_by_month();

    /// Yearly cost of one kW financed by a level-payment monthly loan, net of
    /// the tax credit share: credit_fraction * 12 * capex * r / (1 - (1+r)^-n)
    /// with r = annual_rate / 12. A zero rate gives 12 * capex / n.
    double amortized_cost(double capex, double annual_rate, int n_months, double credit_fraction);

    struct SynthParams
    {
        int year_days = 365;
        double latitude_deg = 42.4;
        double base_kwh = 0.55;        // overnight load
        double seasonal_kwh = 0.35;    // winter and summer peaks
        double evening_kwh = 0.9;      // evening bump height
        double evening_hour = 19.0;
        double evening_width = 2.0;    // hours
        double morning_kwh = 0.3;
        double morning_hour = 7.5;
        double noise_kwh = 0.12;
        double clear_sky_cf = 0.82;    // capacity factor at zenith on a clear day
        double cloud_mean = 0.72;      // mean daily clearness
        double cloud_sd = 0.22;
        double cloud_floor = 0.08;
    };

    /// Deterministic synthetic year of hourly demand and capacity factors
    /// shaped like a Massachusetts single-family home.
    std::vector<HourlyRecord> synth_generate(std::uint64_t seed, SynthParams const& params = {});

    struct BuildOptions
    {
        double elasticity = -0.25;
        double anchor_price = 0.35;
        /// $3750/kW over a 10-year 5.5% loan with a 30% tax credit.
        double c_g = amortized_cost(3750.0, 0.055, 120, 0.7);
        double g_max = 13.0;
    };

    /// Calibrates one utility per period and attaches clipped-normal capacity
    /// factors; periods with zero demand become degenerate and periods with
    /// zero mean capacity factor become non-generating.
    Scenario build_scenario(
        std::vector<PeriodAggregate> const& aggregates,
        ValidatedSchedule const& schedule,
        BuildOptions const& options = {});

    // CSV ----------------------------------------------------------------

    std::vector<HourlyRecord> read_hourly_csv(std::istream& in, std::string const& source = "<input>");
    std::vector<HourlyRecord> read_hourly_csv(std::string const& path);
    void write_hourly_csv(std::ostream& out, std::vector<HourlyRecord> const& records);

    std::vector<PeriodAggregate> read_aggregates_csv(
        std::istream& in, std::string const& source = "<input>");
    std::vector<PeriodAggregate> read_aggregates_csv(std::string const& path);
    void write_aggregates_csv(std::ostream& out, std::vector<PeriodAggregate> const& aggregates);

    /// period_id, a, b, mean_cf, cf_sigma, cf_max.
    void write_calibration_csv(std::ostream& out, Scenario const& scenario);

    /// Nine significant digits, shortest form.
    std::string format_number(double v);

    // Sweeps -------------------------------------------------------------

    struct SweepSpec
    {
        double dpi_plus_min = 0.0;
        double dpi_plus_max = 0.15;
        double dpi_minus_min = -0.15;
        double dpi_minus_max = 0.0;
        int grid_n = 16;
        unsigned jobs = 1;
        SolveOptions solve;
    };

    struct SweepRow
    {
        double dpi_plus = 0.0;
        double dpi_minus = 0.0;
        double g_star = 0.0;
        double net_demand_endog = 0.0;
        double net_demand_fixed = 0.0;
        double payment_endog = 0.0;
        double payment_fixed = 0.0;
        bool valid = false;
    };

    struct SweepGrid
    {
        double g_fixed = 0.0;
        int grid_n = 0;
        /// Row-major: index = i_plus * grid_n + i_minus.
        std::vector<SweepRow> rows;

        [[nodiscard]] SweepRow const& at(int i_plus, int i_minus) const
        {
            return rows[static_cast<std::size_t>(i_plus * grid_n + i_minus)];
        }
    };

    /// Perturbs every period by each (dpi_plus, dpi_minus) grid point and
    /// re-solves capacity; the fixed-capacity columns keep the baseline g*.
    SweepGrid run_sweep(Scenario const& scenario, SweepSpec const& spec);

    void write_sweep_csv(std::ostream& out, SweepGrid const& grid);
    SweepGrid read_sweep_csv(std::istream& in, std::string const& source = "<input>");
}
