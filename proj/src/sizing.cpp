#include "nemsizer/sizing.hpp"

#include "nemsizer/errors.hpp"
#include "parallel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace nemsizer
{
    std::string_view
    to_string(Classification c)
    {
        switch (c)
        {
            case Classification::Interior:
                return "interior";
            case Classification::AtZero:
                return "at-zero";
            case Classification::AtMax:
                return "at-max";
            case Classification::SetValued:
                return "set-valued";
        }
        return "unknown";
    }

    double
    period_marginal_value(
        Scenario const& scenario, std::size_t t, double g, ExpectOptions const& options)
    {
        auto const& pm = scenario.period(t);
        if (!pm.cf.generating())
        {
            return 0.0;
        }
        auto const& price = scenario.price(t);
        auto const th = scenario.thresholds(t);
        double const h = pm.hours;
        double const x = h * g;
        auto value = [&](double psi) {
            double const gen = x * psi;
            double gamma = 0.0;
            if (gen < th.d_plus)
            {
                gamma = price.import_price;
            }
            else if (gen > th.d_minus)
            {
                gamma = price.export_price;
            }
            else
            {
                gamma = pm.utility.marginal(gen);
            }
            return h * psi * gamma;
        };
        return expect(pm.cf, {regime_breakpoints(pm.cf, x, th), value}, options);
    }

    double
    marginal_value(Scenario const& scenario, double g, ExpectOptions const& options)
    {
        if (!(g >= 0.0))
        {
            throw ValidationError("capacity must be non-negative");
        }
        double total = 0.0;
        for (std::size_t t = 0; t < scenario.size(); ++t)
        {
            total += period_marginal_value(scenario, t, g, options);
        }
        if (!std::isfinite(total))
        {
            std::ostringstream os;
            os.precision(17);
            os << "marginal value is not finite at g=" << g;
            throw NumericalError(os.str());
        }
        return total;
    }

    double
    flat_bound(Scenario const& scenario)
    {
        double bound = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < scenario.size(); ++t)
        {
            auto const& pm = scenario.period(t);
            if (!pm.cf.generating())
            {
                continue;
            }
            double const top = pm.hours * pm.cf.support_max();
            bound = std::min(bound, scenario.thresholds(t).d_plus / top);
        }
        return bound;
    }

    InvestmentResult
    solve_capacity(
        Scenario const& scenario, double c_g, double g_max, SolveOptions const& options)
    {
        if (!(c_g >= 0.0) || !std::isfinite(c_g))
        {
            throw ValidationError("PV cost must be finite and non-negative");
        }
        if (!(g_max > 0.0) || !std::isfinite(g_max))
        {
            throw ValidationError("capacity bound must be finite and positive");
        }

        auto F = [&](double g) { return marginal_value(scenario, g, options.expect); };

        InvestmentResult r;
        r.c_g = c_g;
        r.g_max = g_max;
        r.flat_bound = flat_bound(scenario);
        r.F0 = F(0.0);
        r.F_gmax = F(g_max);
        double const tol = options.set_valued_tol;

        auto finish = [&](Classification c, double g) {
            r.classification = c;
            r.g_star = g;
            r.lo = g;
            r.hi = g;
            r.F_at_gstar = F(g);
            return r;
        };

        if (c_g > r.F0 + tol)
        {
            return finish(Classification::AtZero, 0.0);
        }
        if (std::abs(c_g - r.F0) <= tol)
        {
            double const edge = std::min(r.flat_bound, g_max);
            r.classification = Classification::SetValued;
            r.lo = 0.0;
            r.hi = edge;
            r.g_star = 0.5 * edge;
            r.F_at_gstar = F(r.g_star);
            return r;
        }
        if (c_g < r.F_gmax - tol)
        {
            return finish(Classification::AtMax, g_max);
        }

        // F(lo) = F(0) > c_g and F(hi) <= c_g + tol.
        double lo = std::min(r.flat_bound, g_max);
        double hi = g_max;
        double const gtol = options.rel_gtol * g_max;
        while (hi - lo > gtol)
        {
            double const mid = 0.5 * (lo + hi);
            if (F(mid) > c_g)
            {
                lo = mid;
            }
            else
            {
                hi = mid;
            }
        }
        finish(Classification::Interior, 0.5 * (lo + hi));
        r.g_dagger = r.g_star;
        return r;
    }

    InvestmentResult
    solve_capacity(Scenario const& scenario, SolveOptions const& options)
    {
        return solve_capacity(scenario, scenario.c_g(), scenario.g_max(), options);
    }

    std::vector<std::pair<double, double>>
    marginal_value_curve(Scenario const& scenario, std::vector<double> const& grid, unsigned jobs)
    {
        for (std::size_t i = 0; i < grid.size(); ++i)
        {
            if (!(grid[i] >= 0.0) || !std::isfinite(grid[i]))
            {
                throw ValidationError("curve grid points must be finite and non-negative");
            }
            if (i > 0 && grid[i] < grid[i - 1])
            {
                throw ValidationError("curve grid must be sorted");
            }
        }
        std::vector<std::pair<double, double>> out(grid.size());
        detail::parallel_for(grid.size(), jobs, [&](std::size_t i) {
            out[i] = {grid[i], marginal_value(scenario, grid[i])};
        });
        return out;
    }
}
