#pragma once

#include "nemsizer/stochastic.hpp"
#include "nemsizer/tariff.hpp"
#include "nemsizer/utility.hpp"

#include <vector>

namespace nemsizer
{
    /// Everything the prosumer model needs about one settlement period apart
    /// from its prices.
    struct PeriodModel
    {
        QuadraticUtility utility;
        CapacityFactorDist cf;
        /// Energy produced per kW at capacity factor 1 over the period (the
        /// number of hours it spans). Generation is hours * psi * g.
        double hours = 1.0;
        /// Period with zero anchor demand; its thresholds are both zero.
        bool degenerate = false;
    };

    /// A prosumer facing a tariff: one utility and one capacity-factor law per
    /// settlement period, plus PV cost and capacity bound.
    class Scenario
    {
      public:
        /// Throws ValidationError unless there is exactly one PeriodModel per
        /// tariff period, c_g >= 0 and g_max > 0.
        Scenario(
            ValidatedSchedule schedule,
            std::vector<PeriodModel> periods,
            double c_g,
            double g_max);

        [[nodiscard]] ValidatedSchedule const& schedule() const { return schedule_; }
        [[nodiscard]] std::vector<PeriodModel> const& periods() const { return periods_; }
        [[nodiscard]] PeriodModel const& period(std::size_t t) const { return periods_[t]; }
        [[nodiscard]] PeriodPrice const& price(std::size_t t) const { return schedule_.price(t); }
        [[nodiscard]] std::size_t size() const { return periods_.size(); }
        [[nodiscard]] double c_g() const { return c_g_; }
        [[nodiscard]] double g_max() const { return g_max_; }
        [[nodiscard]] Thresholds thresholds(std::size_t t) const;

        [[nodiscard]] Scenario with_schedule(ValidatedSchedule schedule) const;
        [[nodiscard]] Scenario with_costs(double c_g, double g_max) const;

      private:
        ValidatedSchedule schedule_;
        std::vector<PeriodModel> periods_;
        double c_g_ = 0.0;
        double g_max_ = 0.0;
    };
}
