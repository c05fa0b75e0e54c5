/* C interface to the nemsizer library.
 *
 * Objects are opaque handles made by the load functions and released with the
 * matching free function. Every function returns a nem_status; on failure
 * nem_last_error() describes the problem for the calling thread. Strings
 * returned through char** outputs are owned by the caller and must be released
 * with nem_free_string.
 */
#ifndef NEMSIZER_NEMSIZER_H
#define NEMSIZER_NEMSIZER_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NEMSIZER_BUILDING_LIBRARY)
#    define NEM_API __declspec(dllexport)
#  else
#    define NEM_API __declspec(dllimport)
#  endif
#else
#  define NEM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nem_status
{
    NEM_OK = 0,
    NEM_ERR_VALIDATION = 1,       /* bad input: config, prices, ranges */
    NEM_ERR_NUMERICAL = 2,        /* non-finite or inconsistent computation */
    NEM_ERR_INVALID_ARGUMENT = 3, /* null handle or pointer, bad enum value */
    NEM_ERR_INTERNAL = 4          /* anything else (allocation failure, ...) */
} nem_status;

typedef enum nem_format
{
    NEM_FORMAT_CSV = 0,
    NEM_FORMAT_JSON = 1
} nem_format;

typedef enum nem_classification
{
    NEM_INTERIOR = 0,
    NEM_AT_ZERO = 1,
    NEM_AT_MAX = 2,
    NEM_SET_VALUED = 3
} nem_classification;

typedef struct nem_investment
{
    double g_star;
    nem_classification classification;
    double lo;
    double hi;
    double F_at_gstar;
    double c_g;
    double g_max;
    double flat_bound;
    double F0;
    double F_gmax;
} nem_investment;

typedef struct nem_sweep_spec
{
    double dpi_plus_min;
    double dpi_plus_max;
    double dpi_minus_min;
    double dpi_minus_max;
    int grid_n;
    unsigned jobs;
} nem_sweep_spec;

typedef struct nem_tariff nem_tariff;
typedef struct nem_scenario nem_scenario;

/* Library version, e.g. "0.1.0". Static storage. */
NEM_API const char* nem_version(void);

/* Message for the last failed call on this thread ("" if none). */
NEM_API const char* nem_last_error(void);

NEM_API void nem_free_string(char* s);

/* Parses a config, validates its tariff and, when it has a [scenario] table,
 * builds the scenario too. *has_scenario (optional) reports which. */
NEM_API nem_status nem_config_check(const char* config_path, int* has_scenario);

/* Tariffs -------------------------------------------------------------- */

/* Reads the [tariff] table of a TOML config and validates it. */
NEM_API nem_status nem_tariff_load(const char* config_path, nem_tariff** out);
NEM_API void nem_tariff_free(nem_tariff* tariff);
NEM_API nem_status nem_tariff_period_count(const nem_tariff* tariff, size_t* out);
NEM_API nem_status nem_tariff_price(
    const nem_tariff* tariff, size_t period, double* import_price, double* export_price);
/* Settlement period of (month 1..12, hour 0..23). */
NEM_API nem_status nem_tariff_assign(const nem_tariff* tariff, int month, int hour, size_t* out);
/* Periods, prices and repair flags. */
NEM_API nem_status nem_tariff_report(const nem_tariff* tariff, nem_format format, char** out);

/* Scenarios ------------------------------------------------------------ */

/* Builds the scenario described by a TOML config (tariff plus data). */
NEM_API nem_status nem_scenario_load(const char* config_path, nem_scenario** out);
NEM_API void nem_scenario_free(nem_scenario* scenario);
NEM_API nem_status nem_scenario_period_count(const nem_scenario* scenario, size_t* out);
NEM_API nem_status nem_scenario_costs(const nem_scenario* scenario, double* c_g, double* g_max);
NEM_API nem_status nem_scenario_set_costs(nem_scenario* scenario, double c_g, double g_max);

NEM_API nem_status nem_marginal_value(const nem_scenario* scenario, double g, double* out);
NEM_API nem_status nem_surplus(const nem_scenario* scenario, double g, double* out);
NEM_API nem_status nem_solve(const nem_scenario* scenario, nem_investment* out);

/* Reports -------------------------------------------------------------- */

NEM_API nem_status nem_report_calibration(
    const nem_scenario* scenario, nem_format format, char** out);
/* Expected dispatch per period at capacity g; a negative g means g*. */
NEM_API nem_status nem_report_dispatch(
    const nem_scenario* scenario, double g, nem_format format, char** out);
NEM_API nem_status nem_report_size(const nem_scenario* scenario, nem_format format, char** out);
/* `steps` evenly spaced capacities from g_lo to g_hi inclusive. */
NEM_API nem_status nem_report_curve(
    const nem_scenario* scenario,
    double g_lo,
    double g_hi,
    int steps,
    unsigned jobs,
    nem_format format,
    char** out);
NEM_API nem_status nem_report_sensitivity(
    const nem_scenario* scenario, unsigned jobs, nem_format format, char** out);
/* Sign report for price changes in period `tau`; `other` is the period used
 * for the other-period rows. */
NEM_API nem_status nem_report_sign_table(
    const nem_scenario* scenario, size_t tau, size_t other, nem_format format, char** out);
NEM_API nem_status nem_report_sweep(
    const nem_scenario* scenario, const nem_sweep_spec* spec, nem_format format, char** out);

/* Synthetic hourly CSV (month, day, hour, demand_kwh, capacity_factor). */
NEM_API nem_status nem_synth_hourly_csv(uint64_t seed, char** out);

#ifdef __cplusplus
}
#endif

#endif
