#pragma once

#include "nemsizer/dispatch.hpp"
#include "nemsizer/model.hpp"
#include "nemsizer/sizing.hpp"
#include "nemsizer/tariff.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace nemsizer::test
{
    /// One period, point-mass capacity factor: the hand-solvable case.
    inline Scenario
    single_period(
        double a,
        double b,
        double pi_plus,
        double pi_minus,
        double psi,
        double c_g = 0.30,
        double g_max = 13.0)
    {
        auto schedule = validate_schedule(flat_tariff(pi_plus, pi_minus));
        std::vector<PeriodModel> periods{
            PeriodModel{QuadraticUtility{a, b}, CapacityFactorDist::point_mass(psi), 1.0, false}};
        return Scenario{schedule, periods, c_g, g_max};
    }

    inline Scenario
    textbook(double c_g = 0.30)
    {
        return single_period(1.75, 0.7, 0.35, 0.16, 1.0, c_g);
    }

    struct RandomOptions
    {
        std::size_t min_periods = 1;
        std::size_t max_periods = 4;
        bool point_mass = false;
        bool random_hours = true;
        /// c_g is drawn at this fraction range of [F(g_max), F(0)].
        double cost_lo = 0.05;
        double cost_hi = 0.95;
    };

    /// Multi-period scenario with random prices, utilities and capacity
    /// factors. The PV cost is drawn inside the range of the marginal value
    /// so that most draws have an interior optimum.
    inline Scenario
    random_scenario(std::mt19937_64& rng, RandomOptions const& options = {})
    {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
        std::uniform_int_distribution<std::size_t> count(options.min_periods, options.max_periods);
        std::size_t const n = count(rng);

        std::vector<PeriodPrice> prices;
        std::vector<PeriodModel> periods;
        for (std::size_t t = 0; t < n; ++t)
        {
            double const a = uniform(1.0, 3.0);
            double const b = uniform(0.2, 1.5);
            double const pi_plus = uniform(0.15, 0.6);
            double const pi_minus = uniform(0.0, pi_plus - 0.05);
            prices.push_back({pi_plus, pi_minus});
            double const hours = options.random_hours ? uniform(0.5, 4.0) : 1.0;
            auto cf = options.point_mass
                        ? CapacityFactorDist::point_mass(uniform(0.1, 1.0))
                        : CapacityFactorDist::clipped_normal(uniform(0.15, 0.7), uniform(0.05, 0.3));
            periods.push_back(PeriodModel{QuadraticUtility{a, b}, cf, hours, false});
        }
        double const g_max = uniform(5.0, 15.0);
        Scenario s{validate_schedule(round_robin_tariff(prices)), periods, 0.0, g_max};
        double const f0 = marginal_value(s, 0.0);
        double const f_max = marginal_value(s, g_max);
        double const u = uniform(options.cost_lo, options.cost_hi);
        return s.with_costs(std::max(0.0, f_max + u * (f0 - f_max)), g_max);
    }

    // Independent oracles ---------------------------------------------------

    inline double
    normal_cdf(double x)
    {
        return 0.5 * std::erfc(-x / std::numbers::sqrt2);
    }

    inline double
    normal_pdf(double x)
    {
        return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    }

    /// E[f(psi)] for clamp(N(mu, sigma), 0, psi_max): explicit atoms plus a
    /// composite Simpson rule on the density, split at the given kinks.
    inline double
    simpson_expect(
        double mu,
        double sigma,
        double psi_max,
        std::function<double(double)> const& f,
        std::vector<double> kinks = {},
        int panels = 20000)
    {
        double total = normal_cdf(-mu / sigma) * f(0.0)
                     + (1.0 - normal_cdf((psi_max - mu) / sigma)) * f(psi_max);
        kinks.push_back(0.0);
        kinks.push_back(psi_max);
        std::erase_if(kinks, [&](double k) { return k < 0.0 || k > psi_max; });
        std::sort(kinks.begin(), kinks.end());
        for (std::size_t i = 0; i + 1 < kinks.size(); ++i)
        {
            double const lo = kinks[i];
            double const hi = kinks[i + 1];
            if (hi <= lo)
            {
                continue;
            }
            double const h = (hi - lo) / panels;
            auto w = [&](double x) { return f(x) * normal_pdf((x - mu) / sigma) / sigma; };
            // Stay off the segment ends so a jump in f is not sampled on the
            // wrong side.
            double const nudge = 1e-12 * (hi - lo);
            double sum = w(lo + nudge) + w(hi - nudge);
            for (int k = 1; k < panels; ++k)
            {
                sum += (k % 2 == 1 ? 4.0 : 2.0) * w(lo + k * h);
            }
            total += sum * h / 3.0;
        }
        return total;
    }

    /// Maximiser of U(d) - pi+ [d - x]_+ + pi- [x - d]_+ over an even grid
    /// of `points` consumption levels in [0, 2 d_max].
    struct GridDispatch
    {
        double consumption = 0.0;
        double step = 0.0;
    };

    inline GridDispatch
    grid_dispatch(double a, double b, double pi_plus, double pi_minus, double x, int points)
    {
        double const upper = 2.0 * a / b;
        double const step = upper / (points - 1);
        double best = -1e300;
        double best_d = 0.0;
        for (int i = 0; i < points; ++i)
        {
            double const d = i * step;
            double const u = a * d - 0.5 * b * d * d;
            double const value = u - pi_plus * std::max(d - x, 0.0) + pi_minus * std::max(x - d, 0.0);
            if (value > best)
            {
                best = value;
                best_d = d;
            }
        }
        return {best_d, step};
    }

    /// Loan annuity by summing discounted payments month by month.
    inline double
    annuity_by_summation(double capex, double annual_rate, int n_months, double credit_fraction)
    {
        double const r = annual_rate / 12.0;
        double pv = 0.0;
        double discount = 1.0;
        for (int k = 1; k <= n_months; ++k)
        {
            discount /= 1.0 + r;
            pv += discount;
        }
        return credit_fraction * 12.0 * capex / pv;
    }
}
