#pragma once

#include "nemsizer/dispatch.hpp"
#include "nemsizer/sizing.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nemsizer
{
    struct Parameter
    {
        enum class Kind
        {
            ImportPrice,
            ExportPrice,
            PvCost,
        };

        Kind kind = Kind::PvCost;
        std::size_t period = 0; // ignored for PvCost

        static Parameter import_price(std::size_t t) { return {Kind::ImportPrice, t}; }
        static Parameter export_price(std::size_t t) { return {Kind::ExportPrice, t}; }
        static Parameter pv_cost() { return {Kind::PvCost, 0}; }
    };

    /// "import_price[3]", "export_price[0]" or "pv_cost".
    std::string to_string(Parameter const& p);

    enum class DerivativeCase
    {
        Bounds,
        Interior,
        EntryExit,
        Kink,
    };

    std::string_view to_string(DerivativeCase c);

    struct SensitivityOptions
    {
        SolveOptions solve;
        /// Relative offset from a non-smooth point at which one-sided
        /// derivatives are evaluated.
        double side_offset = 1e-9;
    };

    /// dg*/d(parameter). Left/right values are derivatives for a decrease and
    /// an increase of the parameter; `value` is set only where they agree.
    struct DerivativeReport
    {
        Parameter parameter;
        DerivativeCase derivative_case = DerivativeCase::Bounds;
        std::optional<double> value;
        double left_value = 0.0;
        double right_value = 0.0;
        /// Set when the slope of the marginal value vanishes at g*.
        bool infinite_sensitivity = false;
        InvestmentResult investment;
        /// Capacities at which the left and right values were evaluated.
        double g_left = 0.0;
        double g_right = 0.0;
    };

    DerivativeReport dg_dparam(
        Scenario const& scenario,
        double c_g,
        double g_max,
        Parameter parameter,
        SensitivityOptions const& options = {});

    /// Per-period direct and PV components of a derivative.
    struct EffectDecomposition
    {
        std::vector<double> direct;
        std::vector<double> pv;
        std::vector<double> total;

        [[nodiscard]] double direct_sum() const;
        [[nodiscard]] double pv_sum() const;
        [[nodiscard]] double total_sum() const;
    };

    /// Decomposition for a decrease (left) and an increase (right) of the
    /// parameter; the two coincide where g* is differentiable.
    struct EffectReport
    {
        DerivativeReport dg;
        EffectDecomposition left;
        EffectDecomposition right;

        [[nodiscard]] bool smooth() const { return dg.value.has_value(); }
    };

    /// Derivative of each period's expected net demand E[d+ - d-].
    EffectReport net_demand_derivative(
        Scenario const& scenario,
        double c_g,
        double g_max,
        Parameter parameter,
        SensitivityOptions const& options = {});

    struct PeriodEffect
    {
        double direct = 0.0;
        double pv = 0.0;
        double total = 0.0;
    };

    /// Derivative of period t's expected net demand with respect to the
    /// import price of period tau (right-sided where not smooth).
    PeriodEffect net_demand_derivative(
        Scenario const& scenario, double c_g, double g_max, PeriodId tau, PeriodId t);

    /// Derivative of each period's contribution to the expected payment.
    EffectReport payment_derivative(
        Scenario const& scenario,
        double c_g,
        double g_max,
        Parameter parameter,
        SensitivityOptions const& options = {});

    /// Scenario and PV cost with `parameter` shifted by `delta`. Throws
    /// ValidationError when a price shift inverts the tariff.
    struct PerturbedScenario
    {
        Scenario scenario;
        double c_g = 0.0;
    };

    PerturbedScenario shift_parameter(
        Scenario const& scenario, double c_g, Parameter parameter, double delta);

    /// Central finite difference of g* with step h; empty when either side
    /// of the stencil is not a valid tariff.
    std::optional<double> fd_dg(
        Scenario const& scenario,
        double c_g,
        double g_max,
        Parameter parameter,
        double h,
        SolveOptions const& options = {});

    // Sign report ---------------------------------------------------------

    enum class Sign
    {
        Up,
        Down,
        Flat,
        Indeterminate,
    };

    std::string_view to_string(Sign s);

    enum class SignRow
    {
        ConsumptionOwn,
        NetDemandOwn,
        ConsumptionOther,
        NetDemandOther,
        Payment,
        Surplus,
    };

    std::string_view to_string(SignRow r);

    struct SignCell
    {
        SignRow row = SignRow::ConsumptionOwn;
        Parameter::Kind column = Parameter::Kind::PvCost;
        Regime regime = Regime::Import;
        Sign expected = Sign::Flat;
        /// Empty when the cell could not be evaluated locally.
        std::optional<Sign> empirical;
        double difference = 0.0;
        /// Capacity factor at which the realised quantity was evaluated.
        double psi = 0.0;
        /// Why the cell was excluded ("non-local", "regime not reachable", ...).
        std::string note;

        /// True for determinate cells that were evaluated.
        [[nodiscard]] bool asserted() const
        {
            return expected != Sign::Indeterminate && empirical.has_value();
        }
        [[nodiscard]] bool passed() const { return !asserted() || *empirical == expected; }
    };

    struct SignTableOptions
    {
        double price_step = 1e-4;
        double cost_step = 1e-3;
        /// Central differences at or below this (relative to the quantity
        /// scale) count as unchanged.
        double flat_tol = 1e-9;
        SolveOptions solve{1e-9, 1e-13, {}};
    };

    struct SignTable
    {
        std::size_t tau = 0;
        std::size_t other = 0;
        InvestmentResult investment;
        std::vector<SignCell> cells;
    };

    /// Expected sign of a determinate or indeterminate cell; empty for cells
    /// that do not exist (other-period rows under a cost change).
    std::optional<Sign> expected_sign(SignRow row, Parameter::Kind column, Regime regime);

    /// Finite-difference signs of realised per-period quantities at a
    /// representative capacity factor in each regime, for price changes in
    /// period tau and for the PV cost. `other` is the period used for the
    /// other-period rows.
    SignTable sign_table(
        Scenario const& scenario,
        double c_g,
        double g_max,
        std::size_t tau,
        std::size_t other,
        SignTableOptions const& options = {});
}
