#include "nemsizer/nemsizer.h"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace
{
    std::string
    config_path(std::string const& name)
    {
        return std::string{NEMSIZER_CONFIG_DIR} + "/" + name + ".toml";
    }

    /// Takes ownership of a library string.
    std::string
    take(char* s)
    {
        std::string out = s != nullptr ? s : "";
        nem_free_string(s);
        return out;
    }

    struct ScenarioHandle
    {
        nem_scenario* ptr = nullptr;

        explicit ScenarioHandle(std::string const& name)
        {
            EXPECT_EQ(nem_scenario_load(config_path(name).c_str(), &ptr), NEM_OK) << nem_last_error();
        }
        ~ScenarioHandle() { nem_scenario_free(ptr); }
        ScenarioHandle(ScenarioHandle const&) = delete;
        ScenarioHandle& operator=(ScenarioHandle const&) = delete;
    };

    std::filesystem::path
    write_temp(std::string const& name, std::string const& text)
    {
        auto const path = std::filesystem::temp_directory_path() / name;
        std::ofstream{path} << text;
        return path;
    }
}

TEST(CApi, Version)
{
    EXPECT_STREQ(nem_version(), "0.1.0");
}

TEST(CApi, NullArgumentsAreRejected)
{
    nem_scenario* s = nullptr;
    EXPECT_EQ(nem_scenario_load(nullptr, &s), NEM_ERR_INVALID_ARGUMENT);
    EXPECT_NE(std::string{nem_last_error()}, "");
    EXPECT_EQ(nem_scenario_load(config_path("late").c_str(), nullptr), NEM_ERR_INVALID_ARGUMENT);
    double v = 0.0;
    EXPECT_EQ(nem_marginal_value(nullptr, 1.0, &v), NEM_ERR_INVALID_ARGUMENT);
    nem_investment inv{};
    EXPECT_EQ(nem_solve(nullptr, &inv), NEM_ERR_INVALID_ARGUMENT);
    char* out = nullptr;
    EXPECT_EQ(nem_report_size(nullptr, NEM_FORMAT_JSON, &out), NEM_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(out, nullptr);
    nem_tariff_free(nullptr);
    nem_scenario_free(nullptr);
    nem_free_string(nullptr);
}

TEST(CApi, TariffQueries)
{
    nem_tariff* t = nullptr;
    ASSERT_EQ(nem_tariff_load(config_path("late").c_str(), &t), NEM_OK) << nem_last_error();
    size_t n = 0;
    EXPECT_EQ(nem_tariff_period_count(t, &n), NEM_OK);
    EXPECT_EQ(n, 24U);
    size_t id = 0;
    EXPECT_EQ(nem_tariff_assign(t, 7, 19, &id), NEM_OK);
    double ip = 0.0;
    double ep = 0.0;
    EXPECT_EQ(nem_tariff_price(t, id, &ip, &ep), NEM_OK);
    EXPECT_EQ(ip, 0.73);
    EXPECT_NEAR(ep, 0.73 - 1e-6, 1e-15);
    EXPECT_EQ(nem_tariff_assign(t, 13, 0, &id), NEM_ERR_VALIDATION);
    EXPECT_EQ(nem_tariff_price(t, 99, &ip, &ep), NEM_ERR_INVALID_ARGUMENT);

    char* out = nullptr;
    EXPECT_EQ(nem_tariff_report(t, NEM_FORMAT_JSON, &out), NEM_OK);
    auto const j = nlohmann::json::parse(take(out));
    EXPECT_EQ(j.size(), 24U);
    EXPECT_EQ(nem_tariff_report(t, static_cast<nem_format>(7), &out), NEM_ERR_INVALID_ARGUMENT);
    nem_tariff_free(t);
}

TEST(CApi, ConfigCheck)
{
    int has = -1;
    EXPECT_EQ(nem_config_check(config_path("proposed").c_str(), &has), NEM_OK) << nem_last_error();
    EXPECT_EQ(has, 1);
    EXPECT_EQ(nem_config_check(config_path("missing").c_str(), &has), NEM_ERR_VALIDATION);

    auto const inverted = write_temp("nemsizer_capi_inverted.toml", R"([tariff]
granularity = "rule"
[[tariff.rule]]
months = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]
import_price = 0.2
export_price = 0.3
)");
    EXPECT_EQ(nem_config_check(inverted.c_str(), nullptr), NEM_ERR_VALIDATION);
    EXPECT_NE(std::string{nem_last_error()}.find("export price"), std::string::npos) << nem_last_error();
    std::filesystem::remove(inverted);
}

TEST(CApi, SolveAndCosts)
{
    ScenarioHandle s{"proposed"};
    size_t n = 0;
    EXPECT_EQ(nem_scenario_period_count(s.ptr, &n), NEM_OK);
    EXPECT_EQ(n, 24U);
    double c = 0.0;
    double gmax = 0.0;
    EXPECT_EQ(nem_scenario_costs(s.ptr, &c, &gmax), NEM_OK);
    EXPECT_NEAR(c, 341.8577756, 1e-6);
    EXPECT_EQ(gmax, 13.0);

    nem_investment inv{};
    ASSERT_EQ(nem_solve(s.ptr, &inv), NEM_OK) << nem_last_error();
    EXPECT_GE(inv.g_star, 0.0);
    EXPECT_LE(inv.g_star, 13.0);
    EXPECT_EQ(inv.c_g, c);
    double F = 0.0;
    EXPECT_EQ(nem_marginal_value(s.ptr, 0.0, &F), NEM_OK);
    EXPECT_EQ(F, inv.F0);
    if (inv.classification == NEM_INTERIOR)
    {
        EXPECT_LE(std::abs(inv.F_at_gstar - c), 1e-6 * c);
    }

    EXPECT_EQ(nem_scenario_set_costs(s.ptr, inv.F0 * 2, 13.0), NEM_OK);
    EXPECT_EQ(nem_solve(s.ptr, &inv), NEM_OK);
    EXPECT_EQ(inv.classification, NEM_AT_ZERO);
    EXPECT_EQ(inv.g_star, 0.0);
    EXPECT_EQ(nem_scenario_set_costs(s.ptr, -1.0, 13.0), NEM_ERR_VALIDATION);
    EXPECT_EQ(nem_marginal_value(s.ptr, -1.0, &F), NEM_ERR_VALIDATION);
}

TEST(CApi, Reports)
{
    ScenarioHandle s{"late"};
    char* out = nullptr;
    ASSERT_EQ(nem_report_size(s.ptr, NEM_FORMAT_JSON, &out), NEM_OK) << nem_last_error();
    auto const size = nlohmann::json::parse(take(out));
    EXPECT_TRUE(size.contains("g_star"));

    ASSERT_EQ(nem_report_curve(s.ptr, 0.0, 13.0, 14, 2, NEM_FORMAT_CSV, &out), NEM_OK);
    auto const curve = take(out);
    EXPECT_EQ(std::count(curve.begin(), curve.end(), '\n'), 15);
    EXPECT_EQ(nem_report_curve(s.ptr, 0.0, 13.0, 1, 1, NEM_FORMAT_CSV, &out), NEM_ERR_VALIDATION);

    ASSERT_EQ(nem_report_calibration(s.ptr, NEM_FORMAT_JSON, &out), NEM_OK);
    EXPECT_EQ(nlohmann::json::parse(take(out)).size(), 24U);

    ASSERT_EQ(nem_report_dispatch(s.ptr, -1.0, NEM_FORMAT_JSON, &out), NEM_OK);
    EXPECT_FALSE(take(out).empty());

    nem_sweep_spec spec{0.0, 0.15, -0.15, 0.0, 3, 2};
    ASSERT_EQ(nem_report_sweep(s.ptr, &spec, NEM_FORMAT_CSV, &out), NEM_OK);
    auto const sweep = take(out);
    EXPECT_EQ(std::count(sweep.begin(), sweep.end(), '\n'), 10);

    ASSERT_EQ(nem_report_sign_table(s.ptr, 0, 1, NEM_FORMAT_CSV, &out), NEM_OK) << nem_last_error();
    EXPECT_FALSE(take(out).empty());
    EXPECT_EQ(nem_report_sign_table(s.ptr, 99, 1, NEM_FORMAT_CSV, &out), NEM_ERR_INVALID_ARGUMENT);
}

TEST(CApi, SynthIsDeterministic)
{
    char* a = nullptr;
    char* b = nullptr;
    ASSERT_EQ(nem_synth_hourly_csv(5, &a), NEM_OK);
    ASSERT_EQ(nem_synth_hourly_csv(5, &b), NEM_OK);
    auto const sa = take(a);
    EXPECT_EQ(sa, take(b));
    EXPECT_EQ(std::count(sa.begin(), sa.end(), '\n'), 8761);
}

TEST(CApi, LastErrorClearsOnSuccess)
{
    nem_scenario* s = nullptr;
    EXPECT_NE(nem_scenario_load(config_path("missing").c_str(), &s), NEM_OK);
    EXPECT_NE(std::string{nem_last_error()}, "");
    EXPECT_STREQ(nem_version(), "0.1.0");
    size_t n = 0;
    nem_tariff* t = nullptr;
    ASSERT_EQ(nem_tariff_load(config_path("symmetric").c_str(), &t), NEM_OK);
    EXPECT_EQ(nem_tariff_period_count(t, &n), NEM_OK);
    EXPECT_STREQ(nem_last_error(), "");
    nem_tariff_free(t);
}
