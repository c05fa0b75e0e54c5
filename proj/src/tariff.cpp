#include "nemsizer/tariff.hpp"

#include "nemsizer/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace nemsizer
{
    namespace
    {
        constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

        // Export prices above import by less than this are rounding residue
        // (e.g. +a then -a on an equal-price period) and get repaired.
        constexpr double kInversionTolerance = 1e-9;

        std::string
        month_peak_name(int month, bool peak)
        {
            std::ostringstream os;
            os << 'm' << (month < 10 ? "0" : "") << month
               << (peak ? "-peak" : "-offpeak");
            return os.str();
        }

        std::string
        where(AssignmentRule const& rule, std::size_t index)
        {
            std::ostringstream os;
            os << "rule " << index;
            if (rule.source_line > 0)
            {
                os << " (line " << rule.source_line << ")";
            }
            return os.str();
        }

        // Applies the equal-price repair to nominal prices.
        void
        settle_prices(SettlementPeriod& period)
        {
            auto const& nominal = period.nominal;
            if (!std::isfinite(nominal.import_price)
                || !std::isfinite(nominal.export_price))
            {
                throw ValidationError(
                    "period " + period.name + ": non-finite price");
            }
            if (nominal.import_price < 0.0)
            {
                throw ValidationError(
                    "period " + period.name + ": negative import price");
            }
            period.price = nominal;
            period.repaired = false;
            double const gap = nominal.import_price - nominal.export_price;
            if (gap < -kInversionTolerance)
            {
                std::ostringstream os;
                os << "period " << period.name << ": export price "
                   << nominal.export_price << " exceeds import price "
                   << nominal.import_price;
                throw ValidationError(os.str());
            }
            if (gap < kEqualPriceOffset)
            {
                period.price.export_price =
                    nominal.import_price - kEqualPriceOffset;
                period.repaired = true;
            }
        }

        bool
        same_price(PeriodPrice const& a, PeriodPrice const& b)
        {
            return a.import_price == b.import_price
                && a.export_price == b.export_price;
        }
    }

    SettlementPeriod const&
    ValidatedSchedule::period(PeriodId id) const
    {
        if (id.index >= periods_.size())
        {
            throw ValidationError(
                "period index " + std::to_string(id.index) + " out of range");
        }
        return periods_[id.index];
    }

    PeriodId
    ValidatedSchedule::assign(int month, int hour) const
    {
        if (month < 1 || month > 12 || hour < 0 || hour > 23)
        {
            throw ValidationError(
                "cell (month " + std::to_string(month) + ", hour "
                + std::to_string(hour) + ") outside the calendar");
        }
        return PeriodId{table_[month - 1][hour]};
    }

    ValidatedSchedule
    validate_schedule(TariffSchedule const& schedule)
    {
        if (schedule.rules.empty())
        {
            throw ValidationError("tariff has no assignment rules");
        }
        if (!std::isfinite(schedule.fixed_charge))
        {
            throw ValidationError("fixed charge is not finite");
        }

        ValidatedSchedule out;
        out.name_ = schedule.name;
        out.fixed_charge_ = schedule.fixed_charge;
        for (auto& row : out.table_)
        {
            row.fill(kUnassigned);
        }

        // Period key -> index; the key layout depends on the granularity.
        std::map<std::tuple<int, int, std::string>, std::size_t> keys;
        std::vector<std::size_t> owner(12 * 24, kUnassigned);
        std::vector<std::tuple<int, int, std::string>> period_keys;

        for (std::size_t r = 0; r < schedule.rules.size(); ++r)
        {
            auto const& rule = schedule.rules[r];
            if (rule.months.empty())
            {
                throw ValidationError(where(rule, r) + ": no months");
            }
            if (rule.hour_begin < 0 || rule.hour_end > 24
                || rule.hour_begin >= rule.hour_end)
            {
                throw ValidationError(
                    where(rule, r) + ": hours must be a half-open range "
                    "[start, end) with 0 <= start < end <= 24");
            }
            for (int month : rule.months)
            {
                if (month < 1 || month > 12)
                {
                    throw ValidationError(
                        where(rule, r) + ": month " + std::to_string(month)
                        + " outside 1..12");
                }
                std::tuple<int, int, std::string> key =
                    schedule.granularity == Granularity::MonthPeak
                        ? std::tuple<int, int, std::string>{month, rule.peak ? 1 : 0, ""}
                        : std::tuple<int, int, std::string>{
                            0, 0,
                            rule.label.empty() ? "rule" + std::to_string(r)
                                               : rule.label};
                auto [it, inserted] = keys.try_emplace(key, out.periods_.size());
                if (inserted)
                {
                    SettlementPeriod period;
                    if (schedule.granularity == Granularity::MonthPeak)
                    {
                        period.name = month_peak_name(month, rule.peak);
                        period.month = month;
                    }
                    else
                    {
                        period.name = std::get<2>(key);
                    }
                    period.peak = rule.peak;
                    period.nominal = rule.price;
                    out.periods_.push_back(period);
                    period_keys.push_back(key);
                }
                else if (!same_price(out.periods_[it->second].nominal, rule.price))
                {
                    throw ValidationError(
                        where(rule, r) + ": conflicting prices for period "
                        + out.periods_[it->second].name);
                }
                for (int h = rule.hour_begin; h < rule.hour_end; ++h)
                {
                    auto& cell = owner[(month - 1) * 24 + h];
                    if (cell != kUnassigned)
                    {
                        throw ValidationError(
                            where(rule, r) + ": overlaps rule "
                            + std::to_string(cell) + " at (month "
                            + std::to_string(month) + ", hour "
                            + std::to_string(h) + ")");
                    }
                    cell = r;
                    out.table_[month - 1][h] = it->second;
                }
            }
        }

        for (int m = 0; m < 12; ++m)
        {
            for (int h = 0; h < 24; ++h)
            {
                if (out.table_[m][h] == kUnassigned)
                {
                    throw ValidationError(
                        "no rule covers (month " + std::to_string(m + 1)
                        + ", hour " + std::to_string(h) + ")");
                }
            }
        }

        // Month-peak periods are ordered by month, peak bucket first; rule
        // periods keep their first-appearance order.
        if (schedule.granularity == Granularity::MonthPeak)
        {
            std::vector<std::size_t> order(out.periods_.size());
            for (std::size_t i = 0; i < order.size(); ++i)
            {
                order[i] = i;
            }
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                auto const& ka = period_keys[a];
                auto const& kb = period_keys[b];
                if (std::get<0>(ka) != std::get<0>(kb))
                {
                    return std::get<0>(ka) < std::get<0>(kb);
                }
                return std::get<1>(ka) > std::get<1>(kb);
            });
            std::vector<std::size_t> new_index(order.size());
            std::vector<SettlementPeriod> sorted;
            sorted.reserve(order.size());
            for (std::size_t i = 0; i < order.size(); ++i)
            {
                new_index[order[i]] = i;
                sorted.push_back(out.periods_[order[i]]);
            }
            out.periods_ = std::move(sorted);
            for (auto& row : out.table_)
            {
                for (auto& cell : row)
                {
                    cell = new_index[cell];
                }
            }
        }

        for (auto& period : out.periods_)
        {
            settle_prices(period);
        }
        return out;
    }

    PeriodId
    assign_period(int month, int hour, ValidatedSchedule const& schedule)
    {
        return schedule.assign(month, hour);
    }

    ValidatedSchedule
    perturb(
        ValidatedSchedule const& schedule,
        double dpi_plus,
        double dpi_minus,
        std::optional<PeriodId> scope)
    {
        if (!std::isfinite(dpi_plus) || !std::isfinite(dpi_minus))
        {
            throw ValidationError("price perturbation is not finite");
        }
        if (scope && scope->index >= schedule.period_count())
        {
            throw ValidationError(
                "perturbation scope " + std::to_string(scope->index)
                + " out of range");
        }
        ValidatedSchedule out = schedule;
        for (std::size_t t = 0; t < out.periods_.size(); ++t)
        {
            if (scope && scope->index != t)
            {
                continue;
            }
            auto& period = out.periods_[t];
            period.nominal.import_price += dpi_plus;
            period.nominal.export_price += dpi_minus;
            settle_prices(period);
        }
        return out;
    }

    TariffSchedule
    flat_tariff(double import_price, double export_price, double fixed_charge)
    {
        TariffSchedule schedule;
        schedule.name = "flat";
        schedule.fixed_charge = fixed_charge;
        schedule.granularity = Granularity::Rule;
        AssignmentRule rule;
        rule.months = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
        rule.hour_begin = 0;
        rule.hour_end = 24;
        rule.peak = true;
        rule.price = {import_price, export_price};
        rule.label = "all";
        schedule.rules.push_back(rule);
        return schedule;
    }

    TariffSchedule
    round_robin_tariff(std::vector<PeriodPrice> const& prices, double fixed_charge)
    {
        if (prices.empty() || prices.size() > 12)
        {
            throw ValidationError("round-robin tariff needs 1..12 periods");
        }
        TariffSchedule schedule;
        schedule.name = "round-robin";
        schedule.fixed_charge = fixed_charge;
        schedule.granularity = Granularity::Rule;
        for (std::size_t k = 0; k < prices.size(); ++k)
        {
            AssignmentRule rule;
            for (int m = 1; m <= 12; ++m)
            {
                if (static_cast<std::size_t>(m - 1) % prices.size() == k)
                {
                    rule.months.push_back(m);
                }
            }
            rule.price = prices[k];
            rule.label = "p" + std::to_string(k);
            schedule.rules.push_back(rule);
        }
        return schedule;
    }
}
