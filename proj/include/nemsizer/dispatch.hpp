#pragma once

#include "nemsizer/model.hpp"

#include <span>
#include <string_view>

namespace nemsizer
{
    enum class Regime
    {
        Import,
        NetZero,
        Export,
    };

    std::string_view to_string(Regime regime);

    /// Optimal operation of one period for a realised generation level.
    struct DispatchResult
    {
        double consumption = 0.0;
        double imported = 0.0;
        double exported = 0.0;
        Regime regime = Regime::Import;
        double period_payment = 0.0; // pi+ * imported - pi- * exported
        double period_utility = 0.0; // U(consumption)

        [[nodiscard]] double net_demand() const { return imported - exported; }
    };

    /// Closed-form dispatch for generation `generation` = psi * g (kWh):
    /// consume the import threshold while generation is below it, the export
    /// threshold once generation exceeds it, and exactly the generation in
    /// between (both ends inclusive).
    DispatchResult dispatch_for_generation(
        QuadraticUtility const& u,
        PeriodPrice const& price,
        Thresholds const& th,
        double generation);

    /// Throws ValidationError for g < 0 or psi outside [0, 1].
    DispatchResult optimal_dispatch(
        QuadraticUtility const& u, PeriodPrice const& price, double g, double psi);

    /// Fixed charge plus the net energy bill of one realised dispatch per
    /// period.
    double payment(ValidatedSchedule const& schedule, std::span<DispatchResult const> dispatches);

    struct PeriodExpectation
    {
        double consumption = 0.0;
        double imported = 0.0;
        double exported = 0.0;
        double payment = 0.0;
        double utility = 0.0;
        RegimeProbabilities regimes;

        [[nodiscard]] double net_demand() const { return imported - exported; }
    };

    /// Expectations over psi of one period's optimal dispatch at capacity g;
    /// generation is hours * psi * g.
    PeriodExpectation expected_period_quantities(
        QuadraticUtility const& u,
        PeriodPrice const& price,
        CapacityFactorDist const& dist,
        double g,
        double hours = 1.0);

    PeriodExpectation expected_period_quantities(Scenario const& scenario, std::size_t t, double g);

    /// Sum over periods of expected utility minus expected energy bill, minus
    /// c_g * g and the fixed charge.
    double surplus(Scenario const& scenario, double g, double c_g);
    double surplus(Scenario const& scenario, double g);

    /// Fixed charge plus expected energy bill at capacity g.
    double expected_payment(Scenario const& scenario, double g);

    /// Sum over periods of expected imports minus exports at capacity g.
    double expected_net_demand(Scenario const& scenario, double g);
}
