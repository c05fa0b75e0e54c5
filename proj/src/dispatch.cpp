#include "nemsizer/dispatch.hpp"

#include "nemsizer/errors.hpp"

#include <string>

namespace nemsizer
{
    std::string_view
    to_string(Regime regime)
    {
        switch (regime)
        {
            case Regime::Import:
                return "import";
            case Regime::NetZero:
                return "net-zero";
            case Regime::Export:
                return "export";
        }
        return "unknown";
    }

    DispatchResult
    dispatch_for_generation(
        QuadraticUtility const& u,
        PeriodPrice const& price,
        Thresholds const& th,
        double generation)
    {
        DispatchResult r;
        if (generation < th.d_plus)
        {
            r.regime = Regime::Import;
            r.consumption = th.d_plus;
            r.imported = th.d_plus - generation;
        }
        else if (generation > th.d_minus)
        {
            r.regime = Regime::Export;
            r.consumption = th.d_minus;
            r.exported = generation - th.d_minus;
        }
        else
        {
            r.regime = Regime::NetZero;
            r.consumption = generation;
        }
        r.period_payment = price.import_price * r.imported - price.export_price * r.exported;
        r.period_utility = u.value(r.consumption);
        return r;
    }

    DispatchResult
    optimal_dispatch(QuadraticUtility const& u, PeriodPrice const& price, double g, double psi)
    {
        if (!(g >= 0.0))
        {
            throw ValidationError("capacity must be non-negative");
        }
        if (!(psi >= 0.0 && psi <= 1.0))
        {
            throw ValidationError("capacity factor must lie in [0, 1]");
        }
        return dispatch_for_generation(u, price, thresholds(u, price), g * psi);
    }

    double
    payment(ValidatedSchedule const& schedule, std::span<DispatchResult const> dispatches)
    {
        if (dispatches.size() != schedule.period_count())
        {
            throw ValidationError(
                "payment needs one dispatch per period ("
                + std::to_string(schedule.period_count()) + "), got "
                + std::to_string(dispatches.size()));
        }
        double total = schedule.fixed_charge();
        for (std::size_t t = 0; t < dispatches.size(); ++t)
        {
            auto const& p = schedule.price(t);
            total += p.import_price * dispatches[t].imported
                   - p.export_price * dispatches[t].exported;
        }
        return total;
    }

    namespace
    {
        PeriodExpectation
        expected_with(
            QuadraticUtility const& u,
            PeriodPrice const& price,
            Thresholds const& th,
            CapacityFactorDist const& dist,
            double g,
            double hours)
        {
            if (!(g >= 0.0))
            {
                throw ValidationError("capacity must be non-negative");
            }
            double const x = hours * g;
            auto at = [&](double psi) { return dispatch_for_generation(u, price, th, x * psi); };
            auto breaks = regime_breakpoints(dist, x, th);
            auto take = [&](auto field) {
                return expect(dist, {breaks, [&](double psi) { return field(at(psi)); }});
            };

            PeriodExpectation e;
            e.consumption = take([](DispatchResult const& r) { return r.consumption; });
            e.imported = take([](DispatchResult const& r) { return r.imported; });
            e.exported = take([](DispatchResult const& r) { return r.exported; });
            e.payment = take([](DispatchResult const& r) { return r.period_payment; });
            e.utility = take([](DispatchResult const& r) { return r.period_utility; });
            e.regimes = regime_probabilities(dist, x, th);
            return e;
        }

        template <typename Field>
        double
        expected_field(Scenario const& scenario, std::size_t t, double g, Field field)
        {
            auto const& pm = scenario.period(t);
            auto const& price = scenario.price(t);
            auto const th = scenario.thresholds(t);
            double const x = pm.hours * g;
            return expect(
                pm.cf,
                {regime_breakpoints(pm.cf, x, th),
                 [&](double psi) {
                     return field(dispatch_for_generation(pm.utility, price, th, x * psi));
                 }});
        }
    }

    PeriodExpectation
    expected_period_quantities(
        QuadraticUtility const& u,
        PeriodPrice const& price,
        CapacityFactorDist const& dist,
        double g,
        double hours)
    {
        return expected_with(u, price, thresholds(u, price), dist, g, hours);
    }

    PeriodExpectation
    expected_period_quantities(Scenario const& scenario, std::size_t t, double g)
    {
        auto const& pm = scenario.period(t);
        return expected_with(
            pm.utility, scenario.price(t), scenario.thresholds(t), pm.cf, g, pm.hours);
    }

    double
    surplus(Scenario const& scenario, double g, double c_g)
    {
        if (!(g >= 0.0))
        {
            throw ValidationError("capacity must be non-negative");
        }
        double total = -c_g * g - scenario.schedule().fixed_charge();
        for (std::size_t t = 0; t < scenario.size(); ++t)
        {
            total += expected_field(scenario, t, g, [](DispatchResult const& r) {
                return r.period_utility - r.period_payment;
            });
        }
        return total;
    }

    double
    surplus(Scenario const& scenario, double g)
    {
        return surplus(scenario, g, scenario.c_g());
    }

    double
    expected_payment(Scenario const& scenario, double g)
    {
        double total = scenario.schedule().fixed_charge();
        for (std::size_t t = 0; t < scenario.size(); ++t)
        {
            total += expected_field(
                scenario, t, g, [](DispatchResult const& r) { return r.period_payment; });
        }
        return total;
    }

    double
    expected_net_demand(Scenario const& scenario, double g)
    {
        double total = 0.0;
        for (std::size_t t = 0; t < scenario.size(); ++t)
        {
            total += expected_field(
                scenario, t, g, [](DispatchResult const& r) { return r.net_demand(); });
        }
        return total;
    }
}
