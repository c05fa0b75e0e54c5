#pragma once

#include "nemsizer/scenario.hpp"
#include "nemsizer/sensitivity.hpp"
#include "nemsizer/sizing.hpp"

#include <string>
#include <utility>
#include <vector>

namespace nemsizer
{
    enum class Format
    {
        Csv,
        Json,
    };

    /// Period names, prices and whether the equal-price repair applied.
    std::string tariff_report(ValidatedSchedule const& schedule, Format format);

    /// Calibrated utility and capacity-factor parameters per period.
    std::string calibration_report(Scenario const& scenario, Format format);

    /// Regime probabilities and expected dispatch per period at capacity g.
    std::string dispatch_report(Scenario const& scenario, double g, Format format);

    std::string size_report(InvestmentResult const& result, Format format);

    std::string curve_report(std::vector<std::pair<double, double>> const& curve, Format format);

    struct SensitivityEntry
    {
        DerivativeReport dg;
        std::optional<double> fd_check;
        EffectReport net_demand;
        EffectReport payment;
    };

    /// Derivatives of g* for every price and the PV cost, with a central
    /// finite-difference check and the net-demand and payment totals.
    std::vector<SensitivityEntry> sensitivity_entries(Scenario const& scenario, unsigned jobs = 1);
    std::string sensitivity_report(std::vector<SensitivityEntry> const& entries, Format format);

    std::string sign_table_report(SignTable const& table, Format format);

    std::string sweep_report(SweepGrid const& grid, Format format);
}
