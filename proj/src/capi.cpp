#include "nemsizer/nemsizer.h"

#include "nemsizer/config.hpp"
#include "nemsizer/dispatch.hpp"
#include "nemsizer/errors.hpp"
#include "nemsizer/report.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

struct nem_tariff
{
    nemsizer::ValidatedSchedule schedule;
};

struct nem_scenario
{
    nemsizer::Scenario scenario;
};

namespace
{
    thread_local std::string last_error;

    nem_status
    fail(nem_status status, std::string message)
    {
        last_error = std::move(message);
        return status;
    }

    /// Runs `fn`, translating exceptions into status codes.
    template <typename Fn>
    nem_status
    guarded(Fn&& fn)
    {
        try
        {
            last_error.clear();
            fn();
            return NEM_OK;
        }
        catch (nemsizer::ValidationError const& e)
        {
            return fail(NEM_ERR_VALIDATION, e.what());
        }
        catch (nemsizer::NumericalError const& e)
        {
            return fail(NEM_ERR_NUMERICAL, e.what());
        }
        catch (std::bad_alloc const&)
        {
            return fail(NEM_ERR_INTERNAL, "out of memory");
        }
        catch (std::exception const& e)
        {
            return fail(NEM_ERR_INTERNAL, e.what());
        }
        catch (...)
        {
            return fail(NEM_ERR_INTERNAL, "unknown error");
        }
    }

    char*
    copy_string(std::string const& s)
    {
        auto* out = static_cast<char*>(std::malloc(s.size() + 1));
        if (out == nullptr)
        {
            throw std::bad_alloc{};
        }
        std::memcpy(out, s.c_str(), s.size() + 1);
        return out;
    }

    bool
    to_format(nem_format f, nemsizer::Format& out)
    {
        switch (f)
        {
            case NEM_FORMAT_CSV:
                out = nemsizer::Format::Csv;
                return true;
            case NEM_FORMAT_JSON:
                out = nemsizer::Format::Json;
                return true;
        }
        return false;
    }

    nem_status
    null_argument(char const* what)
    {
        return fail(NEM_ERR_INVALID_ARGUMENT, std::string{what} + " must not be null");
    }

    /// Common shape of every report entry point.
    template <typename Handle, typename Fn>
    nem_status
    report(Handle const* handle, nem_format format, char** out, Fn&& fn)
    {
        if (handle == nullptr)
        {
            return null_argument("handle");
        }
        if (out == nullptr)
        {
            return null_argument("output");
        }
        nemsizer::Format f{};
        if (!to_format(format, f))
        {
            return fail(NEM_ERR_INVALID_ARGUMENT, "unknown output format");
        }
        *out = nullptr;
        return guarded([&] { *out = copy_string(fn(f)); });
    }

    nem_classification
    to_c(nemsizer::Classification c)
    {
        switch (c)
        {
            case nemsizer::Classification::Interior:
                return NEM_INTERIOR;
            case nemsizer::Classification::AtZero:
                return NEM_AT_ZERO;
            case nemsizer::Classification::AtMax:
                return NEM_AT_MAX;
            case nemsizer::Classification::SetValued:
                return NEM_SET_VALUED;
        }
        return NEM_INTERIOR;
    }
}

extern "C" {

const char*
nem_version(void)
{
    return "0.1.0";
}

const char*
nem_last_error(void)
{
    return last_error.c_str();
}

void
nem_free_string(char* s)
{
    std::free(s);
}

nem_status
nem_config_check(const char* config_path, int* has_scenario)
{
    if (config_path == nullptr)
    {
        return null_argument("config path");
    }
    return guarded([&] {
        auto const config = nemsizer::read_config(config_path);
        if (config.has_scenario)
        {
            (void)nemsizer::build_from_config(config);
        }
        else
        {
            (void)nemsizer::validate_schedule(config.tariff);
        }
        if (has_scenario != nullptr)
        {
            *has_scenario = config.has_scenario ? 1 : 0;
        }
    });
}

nem_status
nem_tariff_load(const char* config_path, nem_tariff** out)
{
    if (config_path == nullptr)
    {
        return null_argument("config path");
    }
    if (out == nullptr)
    {
        return null_argument("output");
    }
    *out = nullptr;
    return guarded([&] {
        auto const config = nemsizer::read_config(config_path);
        *out = new nem_tariff{nemsizer::validate_schedule(config.tariff)};
    });
}

void
nem_tariff_free(nem_tariff* tariff)
{
    delete tariff;
}

nem_status
nem_tariff_period_count(const nem_tariff* tariff, size_t* out)
{
    if (tariff == nullptr || out == nullptr)
    {
        return null_argument("tariff and output");
    }
    *out = tariff->schedule.period_count();
    return NEM_OK;
}

nem_status
nem_tariff_price(const nem_tariff* tariff, size_t period, double* import_price, double* export_price)
{
    if (tariff == nullptr || import_price == nullptr || export_price == nullptr)
    {
        return null_argument("tariff and outputs");
    }
    if (period >= tariff->schedule.period_count())
    {
        return fail(NEM_ERR_INVALID_ARGUMENT, "period index out of range");
    }
    auto const& p = tariff->schedule.price(period);
    *import_price = p.import_price;
    *export_price = p.export_price;
    return NEM_OK;
}

nem_status
nem_tariff_assign(const nem_tariff* tariff, int month, int hour, size_t* out)
{
    if (tariff == nullptr || out == nullptr)
    {
        return null_argument("tariff and output");
    }
    return guarded([&] { *out = nemsizer::assign_period(month, hour, tariff->schedule).index; });
}

nem_status
nem_tariff_report(const nem_tariff* tariff, nem_format format, char** out)
{
    return report(tariff, format, out, [&](nemsizer::Format f) {
        return nemsizer::tariff_report(tariff->schedule, f);
    });
}

nem_status
nem_scenario_load(const char* config_path, nem_scenario** out)
{
    if (config_path == nullptr)
    {
        return null_argument("config path");
    }
    if (out == nullptr)
    {
        return null_argument("output");
    }
    *out = nullptr;
    return guarded([&] { *out = new nem_scenario{nemsizer::load_config(config_path)}; });
}

void
nem_scenario_free(nem_scenario* scenario)
{
    delete scenario;
}

nem_status
nem_scenario_period_count(const nem_scenario* scenario, size_t* out)
{
    if (scenario == nullptr || out == nullptr)
    {
        return null_argument("scenario and output");
    }
    *out = scenario->scenario.size();
    return NEM_OK;
}

nem_status
nem_scenario_costs(const nem_scenario* scenario, double* c_g, double* g_max)
{
    if (scenario == nullptr || c_g == nullptr || g_max == nullptr)
    {
        return null_argument("scenario and outputs");
    }
    *c_g = scenario->scenario.c_g();
    *g_max = scenario->scenario.g_max();
    return NEM_OK;
}

nem_status
nem_scenario_set_costs(nem_scenario* scenario, double c_g, double g_max)
{
    if (scenario == nullptr)
    {
        return null_argument("scenario");
    }
    return guarded([&] { scenario->scenario = scenario->scenario.with_costs(c_g, g_max); });
}

nem_status
nem_marginal_value(const nem_scenario* scenario, double g, double* out)
{
    if (scenario == nullptr || out == nullptr)
    {
        return null_argument("scenario and output");
    }
    return guarded([&] { *out = nemsizer::marginal_value(scenario->scenario, g); });
}

nem_status
nem_surplus(const nem_scenario* scenario, double g, double* out)
{
    if (scenario == nullptr || out == nullptr)
    {
        return null_argument("scenario and output");
    }
    return guarded([&] { *out = nemsizer::surplus(scenario->scenario, g); });
}

nem_status
nem_solve(const nem_scenario* scenario, nem_investment* out)
{
    if (scenario == nullptr || out == nullptr)
    {
        return null_argument("scenario and output");
    }
    return guarded([&] {
        auto const r = nemsizer::solve_capacity(scenario->scenario);
        *out = nem_investment{r.g_star, to_c(r.classification), r.lo, r.hi, r.F_at_gstar,
                              r.c_g, r.g_max, r.flat_bound, r.F0, r.F_gmax};
    });
}

nem_status
nem_report_calibration(const nem_scenario* scenario, nem_format format, char** out)
{
    return report(scenario, format, out, [&](nemsizer::Format f) {
        return nemsizer::calibration_report(scenario->scenario, f);
    });
}

nem_status
nem_report_dispatch(const nem_scenario* scenario, double g, nem_format format, char** out)
{
    return report(scenario, format, out, [&](nemsizer::Format f) {
        double const cap = g < 0.0 ? nemsizer::solve_capacity(scenario->scenario).g_star : g;
        return nemsizer::dispatch_report(scenario->scenario, cap, f);
    });
}

nem_status
nem_report_size(const nem_scenario* scenario, nem_format format, char** out)
{
    return report(scenario, format, out, [&](nemsizer::Format f) {
        return nemsizer::size_report(nemsizer::solve_capacity(scenario->scenario), f);
    });
}

nem_status
nem_report_curve(
    const nem_scenario* scenario,
    double g_lo,
    double g_hi,
    int steps,
    unsigned jobs,
    nem_format format,
    char** out)
{
    return report(scenario, format, out, [&](nemsizer::Format f) {
        if (steps < 2)
        {
            throw nemsizer::ValidationError("curve needs at least two steps");
        }
        if (!(g_lo >= 0.0) || !(g_hi > g_lo))
        {
            throw nemsizer::ValidationError("curve range must satisfy 0 <= gmin < gmax");
        }
        std::vector<double> grid(static_cast<std::size_t>(steps));
        for (int i = 0; i < steps; ++i)
        {
            grid[static_cast<std::size_t>(i)] =
                i + 1 == steps ? g_hi : g_lo + (g_hi - g_lo) * i / (steps - 1);
        }
        return nemsizer::curve_report(
            nemsizer::marginal_value_curve(scenario->scenario, grid, jobs), f);
    });
}

nem_status
nem_report_sensitivity(const nem_scenario* scenario, unsigned jobs, nem_format format, char** out)
{
    return report(scenario, format, out, [&](nemsizer::Format f) {
        return nemsizer::sensitivity_report(
            nemsizer::sensitivity_entries(scenario->scenario, jobs), f);
    });
}

nem_status
nem_report_sign_table(
    const nem_scenario* scenario, size_t tau, size_t other, nem_format format, char** out)
{
    if (scenario != nullptr && (tau >= scenario->scenario.size() || other >= scenario->scenario.size()))
    {
        return fail(NEM_ERR_INVALID_ARGUMENT, "period index out of range");
    }
    return report(scenario, format, out, [&](nemsizer::Format f) {
        auto const& s = scenario->scenario;
        return nemsizer::sign_table_report(
            nemsizer::sign_table(s, s.c_g(), s.g_max(), tau, other), f);
    });
}

nem_status
nem_report_sweep(
    const nem_scenario* scenario, const nem_sweep_spec* spec, nem_format format, char** out)
{
    if (spec == nullptr)
    {
        return null_argument("sweep spec");
    }
    return report(scenario, format, out, [&](nemsizer::Format f) {
        nemsizer::SweepSpec s;
        s.dpi_plus_min = spec->dpi_plus_min;
        s.dpi_plus_max = spec->dpi_plus_max;
        s.dpi_minus_min = spec->dpi_minus_min;
        s.dpi_minus_max = spec->dpi_minus_max;
        s.grid_n = spec->grid_n;
        s.jobs = spec->jobs;
        return nemsizer::sweep_report(nemsizer::run_sweep(scenario->scenario, s), f);
    });
}

nem_status
nem_synth_hourly_csv(uint64_t seed, char** out)
{
    if (out == nullptr)
    {
        return null_argument("output");
    }
    *out = nullptr;
    return guarded([&] {
        std::ostringstream os;
        nemsizer::write_hourly_csv(os, nemsizer::synth_generate(seed));
        *out = copy_string(os.str());
    });
}

}
