#include "nemsizer/model.hpp"

#include "nemsizer/errors.hpp"

#include <cmath>
#include <string>

namespace nemsizer
{
    Scenario::Scenario(
        ValidatedSchedule schedule,
        std::vector<PeriodModel> periods,
        double c_g,
        double g_max)
        : schedule_{std::move(schedule)}
        , periods_{std::move(periods)}
        , c_g_{c_g}
        , g_max_{g_max}
    {
        if (periods_.size() != schedule_.period_count())
        {
            throw ValidationError(
                "scenario has " + std::to_string(periods_.size())
                + " period models for a tariff with "
                + std::to_string(schedule_.period_count()) + " periods");
        }
        if (!(c_g_ >= 0.0) || !std::isfinite(c_g_))
        {
            throw ValidationError("PV cost must be finite and non-negative");
        }
        if (!(g_max_ > 0.0) || !std::isfinite(g_max_))
        {
            throw ValidationError("capacity bound must be finite and positive");
        }
        for (std::size_t t = 0; t < periods_.size(); ++t)
        {
            if (!(periods_[t].hours > 0.0) || !std::isfinite(periods_[t].hours))
            {
                throw ValidationError(
                    "period " + schedule_.periods()[t].name
                    + ": hours must be positive");
            }
        }
    }

    Thresholds
    Scenario::thresholds(std::size_t t) const
    {
        if (periods_[t].degenerate)
        {
            return Thresholds{0.0, 0.0, true};
        }
        return nemsizer::thresholds(periods_[t].utility, schedule_.price(t));
    }

    Scenario
    Scenario::with_schedule(ValidatedSchedule schedule) const
    {
        return Scenario{std::move(schedule), periods_, c_g_, g_max_};
    }

    Scenario
    Scenario::with_costs(double c_g, double g_max) const
    {
        return Scenario{schedule_, periods_, c_g, g_max};
    }
}
