#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace nemsizer
{
    /// Offset subtracted from the export price when it is not strictly below
    /// the import price ($/kWh).
    inline constexpr double kEqualPriceOffset = 1e-6;

    struct PeriodId
    {
        std::size_t index = 0;

        friend auto operator<=>(PeriodId, PeriodId) = default;
    };

    struct PeriodPrice
    {
        double import_price = 0.0; // $/kWh
        double export_price = 0.0; // $/kWh
    };

    /// How assignment rules are grouped into settlement periods.
    enum class Granularity
    {
        /// One period per (month, peak flag) bucket.
        MonthPeak,
        /// One period per rule label; all months of the rule share it.
        Rule,
    };

    /// Maps a set of months and a half-open hour range [hour_begin, hour_end)
    /// to a price pair.
    struct AssignmentRule
    {
        std::vector<int> months; // 1..12
        int hour_begin = 0;      // 0..23
        int hour_end = 24;       // 1..24
        bool peak = false;
        PeriodPrice price;
        std::string label; // only meaningful for Granularity::Rule
        int source_line = 0;
    };

    /// Raw tariff as read from configuration; not yet checked.
    struct TariffSchedule
    {
        std::string name;
        double fixed_charge = 0.0; // $ per billing horizon
        Granularity granularity = Granularity::MonthPeak;
        std::vector<AssignmentRule> rules;
    };

    struct SettlementPeriod
    {
        std::string name;
        /// Prices as configured (after any perturbation), before the
        /// equal-price repair.
        PeriodPrice nominal;
        /// Prices used by the model; export is strictly below import.
        PeriodPrice price;
        bool repaired = false;
        std::optional<int> month;
        bool peak = false;
    };

    /// A tariff whose (month, hour) assignment is total and whose prices
    /// satisfy import > export. Immutable once built.
    class ValidatedSchedule
    {
      public:
        ValidatedSchedule() = default;

        [[nodiscard]] std::string const& name() const { return name_; }
        [[nodiscard]] double fixed_charge() const { return fixed_charge_; }
        [[nodiscard]] std::size_t period_count() const { return periods_.size(); }
        [[nodiscard]] std::vector<SettlementPeriod> const& periods() const { return periods_; }
        [[nodiscard]] SettlementPeriod const& period(PeriodId id) const;
        [[nodiscard]] PeriodPrice const& price(std::size_t t) const { return periods_[t].price; }
        [[nodiscard]] PeriodId assign(int month, int hour) const;

      private:
        friend ValidatedSchedule validate_schedule(TariffSchedule const&);
        friend ValidatedSchedule perturb(
            ValidatedSchedule const&, double, double, std::optional<PeriodId>);

        std::string name_;
        double fixed_charge_ = 0.0;
        std::vector<SettlementPeriod> periods_;
        std::array<std::array<std::size_t, 24>, 12> table_{};
    };

    /// Checks coverage, overlap and price sign, groups cells into periods and
    /// applies the equal-price repair. Throws ValidationError.
    ValidatedSchedule validate_schedule(TariffSchedule const& schedule);

    /// Settlement period of a (month 1..12, hour 0..23) cell.
    PeriodId assign_period(int month, int hour, ValidatedSchedule const& schedule);

    /// Adds (dpi_plus, dpi_minus) to the nominal prices of every period, or of
    /// a single one when `scope` is set, then re-validates. Throws
    /// ValidationError when the export price ends up above the import price or
    /// the import price turns negative.
    ValidatedSchedule perturb(
        ValidatedSchedule const& schedule,
        double dpi_plus,
        double dpi_minus,
        std::optional<PeriodId> scope = std::nullopt);

    /// Tariff with a single period covering the whole year.
    TariffSchedule flat_tariff(
        double import_price, double export_price, double fixed_charge = 0.0);

    /// Tariff with one period per entry of `prices`; months are dealt out
    /// round-robin (month m goes to period (m-1) % n). At most 12 periods.
    TariffSchedule round_robin_tariff(
        std::vector<PeriodPrice> const& prices, double fixed_charge = 0.0);
}
