#pragma once

#include "nemsizer/model.hpp"

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace nemsizer
{
    enum class Classification
    {
        Interior,
        AtZero,
        AtMax,
        SetValued,
    };

    std::string_view to_string(Classification c);

    struct SolveOptions
    {
        /// |c_g - F(0)| at or below this is treated as indifference ($/kW).
        double set_valued_tol = 1e-9;
        /// Bisection stops once the bracket is below rel_gtol * g_max.
        double rel_gtol = 1e-8;
        ExpectOptions expect;
    };

    struct InvestmentResult
    {
        double g_star = 0.0;
        Classification classification = Classification::AtZero;
        /// Optimal set; lo == hi == g_star unless SetValued.
        double lo = 0.0;
        double hi = 0.0;
        /// Unconstrained root of F(g) = c_g when it lies in the search range.
        std::optional<double> g_dagger;
        double F_at_gstar = 0.0;
        double c_g = 0.0;
        double g_max = 0.0;
        double flat_bound = 0.0;
        double F0 = 0.0;
        double F_gmax = 0.0;
    };

    /// Expected marginal value of one more kW of PV at capacity g ($/kW).
    double marginal_value(Scenario const& scenario, double g, ExpectOptions const& options = {});

    /// Contribution of period t to marginal_value.
    double period_marginal_value(
        Scenario const& scenario, std::size_t t, double g, ExpectOptions const& options = {});

    /// Largest g at which every generating period still imports at its
    /// highest possible capacity factor; the marginal value is constant on
    /// [0, flat_bound]. Infinite when no period generates.
    double flat_bound(Scenario const& scenario);

    /// Optimal capacity for PV cost c_g and upper bound g_max.
    InvestmentResult solve_capacity(
        Scenario const& scenario, double c_g, double g_max, SolveOptions const& options = {});

    /// Uses the scenario's own c_g and g_max.
    InvestmentResult solve_capacity(Scenario const& scenario, SolveOptions const& options = {});

    /// (g, F(g)) for every grid point; `jobs` > 1 spreads the points across
    /// threads. The grid must be sorted and non-negative.
    std::vector<std::pair<double, double>> marginal_value_curve(
        Scenario const& scenario, std::vector<double> const& grid, unsigned jobs = 1);
}
