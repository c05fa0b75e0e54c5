// nem-sizer: command-line front end for the nemsizer C API.

#include "nemsizer/nemsizer.h"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace
{
    int
    exit_code(nem_status s)
    {
        switch (s)
        {
            case NEM_OK:
                return 0;
            case NEM_ERR_VALIDATION:
            case NEM_ERR_INVALID_ARGUMENT:
                return 1;
            case NEM_ERR_NUMERICAL:
            case NEM_ERR_INTERNAL:
                return 2;
        }
        return 2;
    }

    struct Shared
    {
        std::string config;
        std::string out;
        std::uint64_t seed = 0;
        std::optional<std::string> format;
        unsigned jobs = 1;
    };

    /// Owns a string returned by the library.
    struct LibString
    {
        char* text = nullptr;
        ~LibString() { nem_free_string(text); }
    };

    struct ScenarioDeleter
    {
        void operator()(nem_scenario* s) const { nem_scenario_free(s); }
    };
    using ScenarioPtr = std::unique_ptr<nem_scenario, ScenarioDeleter>;

    struct TariffDeleter
    {
        void operator()(nem_tariff* t) const { nem_tariff_free(t); }
    };
    using TariffPtr = std::unique_ptr<nem_tariff, TariffDeleter>;

    int
    report_failure(nem_status s)
    {
        std::cerr << "nem-sizer: " << nem_last_error() << '\n';
        return exit_code(s);
    }

    int
    emit(Shared const& shared, char const* text)
    {
        if (shared.out.empty() || shared.out == "-")
        {
            std::cout << text;
            std::cout.flush();
            return std::cout ? 0 : 1;
        }
        std::ofstream file{shared.out, std::ios::binary};
        if (!file)
        {
            std::cerr << "nem-sizer: cannot write '" << shared.out << "'\n";
            return 1;
        }
        file << text;
        return file ? 0 : 1;
    }

    nem_format
    pick_format(Shared const& shared, nem_format fallback)
    {
        if (!shared.format)
        {
            return fallback;
        }
        return *shared.format == "json" ? NEM_FORMAT_JSON : NEM_FORMAT_CSV;
    }

    /// Loads the config's scenario and runs `fn` on it, producing a report.
    int
    with_scenario(
        Shared const& shared,
        std::function<nem_status(nem_scenario*, char**)> const& fn)
    {
        nem_scenario* raw = nullptr;
        if (auto s = nem_scenario_load(shared.config.c_str(), &raw); s != NEM_OK)
        {
            return report_failure(s);
        }
        ScenarioPtr scenario{raw};
        LibString text;
        if (auto s = fn(scenario.get(), &text.text); s != NEM_OK)
        {
            return report_failure(s);
        }
        return emit(shared, text.text);
    }

    void
    add_shared(CLI::App* cmd, Shared& shared, bool needs_config)
    {
        auto* config = cmd->add_option("--config", shared.config, "TOML configuration file");
        if (needs_config)
        {
            config->required()->check(CLI::ExistingFile);
        }
        cmd->add_option("--out", shared.out, "Output file (default: standard output)");
        cmd->add_option("--seed", shared.seed, "Random seed")->envname("NEM_SIZER_SEED");
        cmd->add_option("--format", shared.format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--jobs", shared.jobs, "Worker threads")->check(CLI::Range(1U, 1024U));
    }
}

int
main(int argc, char** argv)
{
    CLI::App app{"Prosumer operation and PV sizing under net energy metering tariffs",
                 "nem-sizer"};
    app.require_subcommand(1);
    app.set_version_flag("--version", nem_version());

    Shared shared;

    auto* validate = app.add_subcommand("validate", "Check a configuration and list its periods");
    add_shared(validate, shared, true);

    auto* calibrate = app.add_subcommand("calibrate", "Per-period utility and capacity-factor parameters");
    add_shared(calibrate, shared, true);

    double dispatch_g = -1.0;
    auto* dispatch = app.add_subcommand("dispatch", "Expected dispatch per period");
    add_shared(dispatch, shared, true);
    dispatch->add_option("--g", dispatch_g, "Capacity in kW (default: optimal capacity)")
        ->check(CLI::NonNegativeNumber);

    auto* size = app.add_subcommand("size", "Optimal PV capacity");
    add_shared(size, shared, true);

    double gmin = 0.0;
    std::optional<double> gmax;
    int steps = 200;
    auto* curve = app.add_subcommand("curve", "Marginal value of PV capacity on a grid");
    add_shared(curve, shared, true);
    curve->add_option("--gmin", gmin, "First capacity (kW)")->check(CLI::NonNegativeNumber);
    curve->add_option("--gmax", gmax, "Last capacity (kW, default: capacity bound)");
    curve->add_option("--steps", steps, "Number of grid points")->check(CLI::Range(2, 1000000));

    auto* sensitivity = app.add_subcommand("sensitivity", "Derivatives of optimal capacity");
    add_shared(sensitivity, shared, true);

    std::size_t tau = 0;
    std::optional<std::size_t> other;
    auto* sign_table = app.add_subcommand("sign-table", "Finite-difference comparative statics signs");
    add_shared(sign_table, shared, true);
    sign_table->add_option("--period", tau, "Period whose prices change");
    sign_table->add_option("--other", other, "Period for the other-period rows (default: next)");

    nem_sweep_spec sweep_spec{0.0, 0.15, -0.15, 0.0, 16, 1};
    auto* sweep = app.add_subcommand("sweep", "Price-perturbation sweep");
    add_shared(sweep, shared, true);
    sweep->add_option("--grid", sweep_spec.grid_n, "Points per axis")->check(CLI::Range(2, 1000));
    sweep->add_option("--dpi-plus-min", sweep_spec.dpi_plus_min, "Smallest import-price shift");
    sweep->add_option("--dpi-plus-max", sweep_spec.dpi_plus_max, "Largest import-price shift");
    sweep->add_option("--dpi-minus-min", sweep_spec.dpi_minus_min, "Smallest export-price shift");
    sweep->add_option("--dpi-minus-max", sweep_spec.dpi_minus_max, "Largest export-price shift");

    auto* synth = app.add_subcommand("synth-data", "Write a synthetic hourly data set");
    add_shared(synth, shared, false);

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::CallForAllHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::CallForVersion const& e)
    {
        return app.exit(e);
    }
    catch (CLI::ParseError const& e)
    {
        app.exit(e);
        return 1;
    }

    if (validate->parsed())
    {
        if (auto s = nem_config_check(shared.config.c_str(), nullptr); s != NEM_OK)
        {
            return report_failure(s);
        }
        nem_tariff* raw = nullptr;
        if (auto s = nem_tariff_load(shared.config.c_str(), &raw); s != NEM_OK)
        {
            return report_failure(s);
        }
        TariffPtr tariff{raw};
        LibString text;
        if (auto s = nem_tariff_report(tariff.get(), pick_format(shared, NEM_FORMAT_CSV), &text.text);
            s != NEM_OK)
        {
            return report_failure(s);
        }
        return emit(shared, text.text);
    }
    if (calibrate->parsed())
    {
        return with_scenario(shared, [&](nem_scenario* s, char** out) {
            return nem_report_calibration(s, pick_format(shared, NEM_FORMAT_CSV), out);
        });
    }
    if (dispatch->parsed())
    {
        return with_scenario(shared, [&](nem_scenario* s, char** out) {
            return nem_report_dispatch(s, dispatch_g, pick_format(shared, NEM_FORMAT_CSV), out);
        });
    }
    if (size->parsed())
    {
        return with_scenario(shared, [&](nem_scenario* s, char** out) {
            return nem_report_size(s, pick_format(shared, NEM_FORMAT_JSON), out);
        });
    }
    if (curve->parsed())
    {
        return with_scenario(shared, [&](nem_scenario* s, char** out) {
            double hi = 0.0;
            if (gmax)
            {
                hi = *gmax;
            }
            else
            {
                double c_g = 0.0;
                if (auto st = nem_scenario_costs(s, &c_g, &hi); st != NEM_OK)
                {
                    return st;
                }
            }
            return nem_report_curve(
                s, gmin, hi, steps, shared.jobs, pick_format(shared, NEM_FORMAT_CSV), out);
        });
    }
    if (sensitivity->parsed())
    {
        return with_scenario(shared, [&](nem_scenario* s, char** out) {
            return nem_report_sensitivity(s, shared.jobs, pick_format(shared, NEM_FORMAT_JSON), out);
        });
    }
    if (sign_table->parsed())
    {
        return with_scenario(shared, [&](nem_scenario* s, char** out) {
            std::size_t n = 0;
            if (auto st = nem_scenario_period_count(s, &n); st != NEM_OK)
            {
                return st;
            }
            std::size_t const o = other ? *other : (n > 1 ? (tau + 1) % n : tau);
            return nem_report_sign_table(s, tau, o, pick_format(shared, NEM_FORMAT_CSV), out);
        });
    }
    if (sweep->parsed())
    {
        sweep_spec.jobs = shared.jobs;
        return with_scenario(shared, [&](nem_scenario* s, char** out) {
            return nem_report_sweep(s, &sweep_spec, pick_format(shared, NEM_FORMAT_CSV), out);
        });
    }
    if (synth->parsed())
    {
        LibString text;
        if (auto s = nem_synth_hourly_csv(shared.seed, &text.text); s != NEM_OK)
        {
            return report_failure(s);
        }
        return emit(shared, text.text);
    }
    return 1;
}
