#include "nemsizer/sensitivity.hpp"

#include "nemsizer/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace nemsizer
{
    std::string
    to_string(Parameter const& p)
    {
        switch (p.kind)
        {
            case Parameter::Kind::ImportPrice:
                return "import_price[" + std::to_string(p.period) + "]";
            case Parameter::Kind::ExportPrice:
                return "export_price[" + std::to_string(p.period) + "]";
            case Parameter::Kind::PvCost:
                return "pv_cost";
        }
        return "unknown";
    }

    std::string_view
    to_string(DerivativeCase c)
    {
        switch (c)
        {
            case DerivativeCase::Bounds:
                return "bounds";
            case DerivativeCase::Interior:
                return "interior";
            case DerivativeCase::EntryExit:
                return "entry-exit";
            case DerivativeCase::Kink:
                return "kink";
        }
        return "unknown";
    }

    std::string_view
    to_string(Sign s)
    {
        switch (s)
        {
            case Sign::Up:
                return "up";
            case Sign::Down:
                return "down";
            case Sign::Flat:
                return "flat";
            case Sign::Indeterminate:
                return "X";
        }
        return "unknown";
    }

    std::string_view
    to_string(SignRow r)
    {
        switch (r)
        {
            case SignRow::ConsumptionOwn:
                return "d_tau";
            case SignRow::NetDemandOwn:
                return "net_tau";
            case SignRow::ConsumptionOther:
                return "d_t";
            case SignRow::NetDemandOther:
                return "net_t";
            case SignRow::Payment:
                return "payment";
            case SignRow::Surplus:
                return "surplus";
        }
        return "unknown";
    }

    double
    EffectDecomposition::direct_sum() const
    {
        return std::accumulate(direct.begin(), direct.end(), 0.0);
    }

    double
    EffectDecomposition::pv_sum() const
    {
        return std::accumulate(pv.begin(), pv.end(), 0.0);
    }

    double
    EffectDecomposition::total_sum() const
    {
        return std::accumulate(total.begin(), total.end(), 0.0);
    }

    namespace
    {
        /// Generation-weighted regime moments of one period at capacity g.
        struct PeriodMoments
        {
            double import_weight = 0.0;  // H * E[psi 1{import}]
            double export_weight = 0.0;  // H * E[psi 1{export}]
            double curvature = 0.0;      // H^2 * E[psi^2 U''(H psi g) 1{net-zero}]
            RegimeProbabilities regimes;
        };

        PeriodMoments
        moments(Scenario const& scenario, std::size_t t, double g, ExpectOptions const& eo)
        {
            PeriodMoments m;
            auto const& pm = scenario.period(t);
            auto const th = scenario.thresholds(t);
            double const h = pm.hours;
            double const x = h * g;
            m.regimes = regime_probabilities(pm.cf, x, th);
            if (!pm.cf.generating() || g == 0.0)
            {
                return m;
            }
            auto const breaks = regime_breakpoints(pm.cf, x, th);
            m.import_weight = h * expect(pm.cf, {breaks, [&](double psi) {
                                                     return x * psi < th.d_plus ? psi : 0.0;
                                                 }}, eo);
            m.export_weight = h * expect(pm.cf, {breaks, [&](double psi) {
                                                     return x * psi > th.d_minus ? psi : 0.0;
                                                 }}, eo);
            if (!pm.utility.is_satiated())
            {
                double const u2 = pm.utility.curvature(0.0);
                m.curvature = h * h * expect(pm.cf, {breaks, [&](double psi) {
                                                         double const gen = x * psi;
                                                         bool const nz = gen >= th.d_plus
                                                                      && gen <= th.d_minus;
                                                         return nz ? psi * psi * u2 : 0.0;
                                                     }}, eo);
            }
            return m;
        }

        struct Slope
        {
            double value = 0.0;
            bool infinite = false;
        };

        /// Implicit-function derivative of g* at capacity g.
        Slope
        interior_slope(Scenario const& scenario, double g, Parameter p, ExpectOptions const& eo)
        {
            double numerator = 0.0;
            double denominator = 0.0;
            for (std::size_t t = 0; t < scenario.size(); ++t)
            {
                auto const m = moments(scenario, t, g, eo);
                denominator += m.curvature;
                if (t == p.period && p.kind == Parameter::Kind::ImportPrice)
                {
                    numerator = m.import_weight;
                }
                if (t == p.period && p.kind == Parameter::Kind::ExportPrice)
                {
                    numerator = m.export_weight;
                }
            }
            double const inf = std::numeric_limits<double>::infinity();
            if (denominator == 0.0)
            {
                if (p.kind == Parameter::Kind::PvCost)
                {
                    return {-inf, true};
                }
                return {numerator > 0.0 ? inf : 0.0, numerator > 0.0};
            }
            if (p.kind == Parameter::Kind::PvCost)
            {
                return {1.0 / denominator, false};
            }
            return {-numerator / denominator, false};
        }

        void
        check_parameter(Scenario const& scenario, Parameter p)
        {
            if (p.kind != Parameter::Kind::PvCost && p.period >= scenario.size())
            {
                throw ValidationError(
                    "parameter period " + std::to_string(p.period) + " out of range (tariff has "
                    + std::to_string(scenario.size()) + " periods)");
            }
        }

        /// Capacity factors of probability mass concentrated at one point.
        std::vector<double>
        atom_locations(CapacityFactorDist const& cf)
        {
            if (!cf.generating())
            {
                return {};
            }
            if (cf.kind() == CapacityFactorDist::Kind::PointMass)
            {
                return {cf.value()};
            }
            if (cf.upper_atom() > 0.0)
            {
                return {cf.psi_max()};
            }
            return {};
        }

        /// Capacity closest to g at which an atom sits exactly on a regime
        /// threshold, if it lies within `tol` of g.
        std::optional<double>
        nearby_kink(Scenario const& scenario, double g, double tol)
        {
            std::optional<double> best;
            for (std::size_t t = 0; t < scenario.size(); ++t)
            {
                auto const& pm = scenario.period(t);
                auto const th = scenario.thresholds(t);
                for (double psi : atom_locations(pm.cf))
                {
                    for (double d : {th.d_plus, th.d_minus})
                    {
                        if (d <= 0.0 || psi <= 0.0)
                        {
                            continue;
                        }
                        double const gk = d / (pm.hours * psi);
                        if (std::abs(gk - g) <= tol
                            && (!best || std::abs(gk - g) < std::abs(*best - g)))
                        {
                            best = gk;
                        }
                    }
                }
            }
            return best;
        }

        /// Rate at which period t's threshold moves with its own price;
        /// zero while the price chokes demand.
        double
        threshold_slope(QuadraticUtility const& u, double price)
        {
            if (u.is_satiated() || u.chokes(price))
            {
                return 0.0;
            }
            return 1.0 / u.curvature(0.0);
        }

        enum class Quantity
        {
            NetDemand,
            Payment,
        };

        EffectDecomposition
        decompose(
            Scenario const& scenario,
            Parameter p,
            double g,
            double dg,
            Quantity q,
            ExpectOptions const& eo)
        {
            std::size_t const n = scenario.size();
            EffectDecomposition e;
            e.direct.assign(n, 0.0);
            e.pv.assign(n, 0.0);
            e.total.assign(n, 0.0);
            for (std::size_t t = 0; t < n; ++t)
            {
                auto const m = moments(scenario, t, g, eo);
                auto const& price = scenario.price(t);
                double const sensitivity = q == Quantity::NetDemand
                    ? m.import_weight + m.export_weight
                    : price.import_price * m.import_weight + price.export_price * m.export_weight;
                e.pv[t] = dg == 0.0 ? 0.0 : -sensitivity * dg;

                if (p.kind != Parameter::Kind::PvCost && t == p.period)
                {
                    auto const& u = scenario.period(t).utility;
                    bool const degenerate = scenario.period(t).degenerate;
                    if (p.kind == Parameter::Kind::ImportPrice)
                    {
                        double const slope = degenerate ? 0.0 : threshold_slope(u, price.import_price);
                        double const mass = m.regimes.import * slope;
                        if (q == Quantity::NetDemand)
                        {
                            e.direct[t] = mass;
                        }
                        else
                        {
                            auto const ex = expected_period_quantities(scenario, t, g);
                            e.direct[t] = ex.imported + price.import_price * mass;
                        }
                    }
                    else
                    {
                        double const slope = degenerate ? 0.0 : threshold_slope(u, price.export_price);
                        double const mass = m.regimes.exported * slope;
                        if (q == Quantity::NetDemand)
                        {
                            e.direct[t] = mass;
                        }
                        else
                        {
                            auto const ex = expected_period_quantities(scenario, t, g);
                            e.direct[t] = -ex.exported + price.export_price * mass;
                        }
                    }
                }
                e.total[t] = e.direct[t] + e.pv[t];
            }
            return e;
        }

        EffectReport
        effect_report(
            Scenario const& scenario,
            double c_g,
            double g_max,
            Parameter p,
            SensitivityOptions const& options,
            Quantity q)
        {
            EffectReport r;
            r.dg = dg_dparam(scenario, c_g, g_max, p, options);
            auto const& eo = options.solve.expect;
            auto finite = [](double v) { return std::isfinite(v) ? v : 0.0; };
            r.left = decompose(scenario, p, r.dg.g_left, finite(r.dg.left_value), q, eo);
            r.right = decompose(scenario, p, r.dg.g_right, finite(r.dg.right_value), q, eo);
            return r;
        }
    }

    DerivativeReport
    dg_dparam(
        Scenario const& scenario,
        double c_g,
        double g_max,
        Parameter parameter,
        SensitivityOptions const& options)
    {
        check_parameter(scenario, parameter);
        auto const& eo = options.solve.expect;
        DerivativeReport r;
        r.parameter = parameter;
        r.investment = solve_capacity(scenario, c_g, g_max, options.solve);
        auto const& inv = r.investment;
        bool const is_cost = parameter.kind == Parameter::Kind::PvCost;
        double const tol = options.solve.set_valued_tol;
        double const up = 1.0 + options.side_offset;
        double const down = 1.0 - options.side_offset;

        auto pinned = [&](double g) {
            r.derivative_case = DerivativeCase::Bounds;
            r.value = 0.0;
            r.left_value = 0.0;
            r.right_value = 0.0;
            r.g_left = g;
            r.g_right = g;
        };

        // One side stays pinned at `pin`; the other follows the interior
        // formula evaluated just inside the interior at `inside`. A price
        // increase moves g* up, a cost increase moves it down.
        auto one_sided = [&](double pin, double inside, bool interior_when_g_rises) {
            r.derivative_case = DerivativeCase::EntryExit;
            auto const s = interior_slope(scenario, inside, parameter, eo);
            r.infinite_sensitivity = s.infinite;
            bool const right_moves = interior_when_g_rises != is_cost;
            if (right_moves)
            {
                r.left_value = 0.0;
                r.right_value = s.value;
                r.g_left = pin;
                r.g_right = inside;
            }
            else
            {
                r.left_value = s.value;
                r.right_value = 0.0;
                r.g_left = inside;
                r.g_right = pin;
            }
            if (r.left_value == r.right_value)
            {
                r.value = r.left_value;
            }
        };

        switch (inv.classification)
        {
            case Classification::AtZero:
                pinned(0.0);
                return r;
            case Classification::AtMax:
                pinned(g_max);
                return r;
            case Classification::SetValued:
                one_sided(0.0, inv.hi * up, true);
                return r;
            case Classification::Interior:
                break;
        }

        if (std::abs(c_g - inv.F_gmax) <= tol)
        {
            one_sided(g_max, g_max * down, false);
            return r;
        }

        double const kink_tol = 16.0 * options.solve.rel_gtol * g_max;
        if (auto gk = nearby_kink(scenario, inv.g_star, kink_tol))
        {
            r.derivative_case = DerivativeCase::Kink;
            auto const below = interior_slope(scenario, *gk * down, parameter, eo);
            auto const above = interior_slope(scenario, *gk * up, parameter, eo);
            r.infinite_sensitivity = below.infinite || above.infinite;
            // Price increases push g* past the kink from below; cost
            // increases from above.
            if (is_cost)
            {
                r.left_value = above.value;
                r.right_value = below.value;
                r.g_left = *gk * up;
                r.g_right = *gk * down;
            }
            else
            {
                r.left_value = below.value;
                r.right_value = above.value;
                r.g_left = *gk * down;
                r.g_right = *gk * up;
            }
            return r;
        }

        r.derivative_case = DerivativeCase::Interior;
        auto const s = interior_slope(scenario, inv.g_star, parameter, eo);
        r.infinite_sensitivity = s.infinite;
        r.left_value = s.value;
        r.right_value = s.value;
        r.g_left = inv.g_star;
        r.g_right = inv.g_star;
        if (!s.infinite)
        {
            r.value = s.value;
        }
        return r;
    }

    EffectReport
    net_demand_derivative(
        Scenario const& scenario,
        double c_g,
        double g_max,
        Parameter parameter,
        SensitivityOptions const& options)
    {
        return effect_report(scenario, c_g, g_max, parameter, options, Quantity::NetDemand);
    }

    PeriodEffect
    net_demand_derivative(
        Scenario const& scenario, double c_g, double g_max, PeriodId tau, PeriodId t)
    {
        if (t.index >= scenario.size())
        {
            throw ValidationError("period " + std::to_string(t.index) + " out of range");
        }
        auto const r =
            net_demand_derivative(scenario, c_g, g_max, Parameter::import_price(tau.index));
        return {r.right.direct[t.index], r.right.pv[t.index], r.right.total[t.index]};
    }

    EffectReport
    payment_derivative(
        Scenario const& scenario,
        double c_g,
        double g_max,
        Parameter parameter,
        SensitivityOptions const& options)
    {
        return effect_report(scenario, c_g, g_max, parameter, options, Quantity::Payment);
    }

    PerturbedScenario
    shift_parameter(Scenario const& scenario, double c_g, Parameter parameter, double delta)
    {
        check_parameter(scenario, parameter);
        switch (parameter.kind)
        {
            case Parameter::Kind::ImportPrice:
                return {scenario.with_schedule(
                            perturb(scenario.schedule(), delta, 0.0, PeriodId{parameter.period})),
                        c_g};
            case Parameter::Kind::ExportPrice:
                return {scenario.with_schedule(
                            perturb(scenario.schedule(), 0.0, delta, PeriodId{parameter.period})),
                        c_g};
            case Parameter::Kind::PvCost:
                break;
        }
        return {scenario, c_g + delta};
    }

    std::optional<double>
    fd_dg(
        Scenario const& scenario,
        double c_g,
        double g_max,
        Parameter parameter,
        double h,
        SolveOptions const& options)
    {
        try
        {
            auto const plus = shift_parameter(scenario, c_g, parameter, h);
            auto const minus = shift_parameter(scenario, c_g, parameter, -h);
            if (plus.c_g < 0.0 || minus.c_g < 0.0)
            {
                return std::nullopt;
            }
            double const gp = solve_capacity(plus.scenario, plus.c_g, g_max, options).g_star;
            double const gm = solve_capacity(minus.scenario, minus.c_g, g_max, options).g_star;
            return (gp - gm) / (2.0 * h);
        }
        catch (ValidationError const&)
        {
            return std::nullopt;
        }
    }

    // Sign report ---------------------------------------------------------

    std::optional<Sign>
    expected_sign(SignRow row, Parameter::Kind column, Regime regime)
    {
        using enum Sign;
        constexpr auto F = Flat;
        constexpr auto U = Up;
        constexpr auto D = Down;
        constexpr auto X = Indeterminate;
        int const r = static_cast<int>(regime);
        auto pick = [&](std::array<Sign, 3> cost,
                        std::array<Sign, 3> imp,
                        std::array<Sign, 3> exp) -> std::optional<Sign> {
            switch (column)
            {
                case Parameter::Kind::PvCost:
                    return cost[r];
                case Parameter::Kind::ImportPrice:
                    return imp[r];
                case Parameter::Kind::ExportPrice:
                    return exp[r];
            }
            return std::nullopt;
        };
        switch (row)
        {
            case SignRow::ConsumptionOwn:
                // Exporting consumption sits at the export threshold, which
                // does not depend on the PV cost.
                return pick({F, D, F}, {D, U, F}, {F, U, D});
            case SignRow::NetDemandOwn:
                return pick({U, F, U}, {D, F, D}, {D, F, D});
            case SignRow::ConsumptionOther:
                if (column == Parameter::Kind::PvCost)
                {
                    return std::nullopt;
                }
                return pick({}, {F, U, F}, {F, U, F});
            case SignRow::NetDemandOther:
                if (column == Parameter::Kind::PvCost)
                {
                    return std::nullopt;
                }
                return pick({}, {D, F, D}, {D, F, D});
            case SignRow::Payment:
                return pick({U, F, U}, {X, F, D}, {D, F, D});
            case SignRow::Surplus:
                return pick({D, D, D}, {X, U, U}, {U, U, U});
        }
        return std::nullopt;
    }

    namespace
    {
        /// A capacity factor inside the support whose generation at g lands
        /// strictly inside the given regime, if there is one.
        std::optional<double>
        representative_psi(PeriodModel const& pm, Thresholds const& th, double g, Regime regime)
        {
            double const x = pm.hours * g;
            if (!pm.cf.generating() || x <= 0.0)
            {
                return std::nullopt;
            }
            auto in_regime = [&](double psi) {
                double const gen = x * psi;
                switch (regime)
                {
                    case Regime::Import:
                        return gen < th.d_plus;
                    case Regime::NetZero:
                        return gen > th.d_plus && gen < th.d_minus;
                    case Regime::Export:
                        return gen > th.d_minus;
                }
                return false;
            };
            if (pm.cf.kind() == CapacityFactorDist::Kind::PointMass)
            {
                double const v = pm.cf.value();
                return in_regime(v) ? std::optional<double>{v} : std::nullopt;
            }
            double lo = 0.0;
            double hi = pm.cf.psi_max();
            switch (regime)
            {
                case Regime::Import:
                    hi = std::min(hi, th.d_plus / x);
                    break;
                case Regime::NetZero:
                    lo = std::max(lo, th.d_plus / x);
                    hi = std::min(hi, th.d_minus / x);
                    break;
                case Regime::Export:
                    lo = std::max(lo, th.d_minus / x);
                    break;
            }
            if (!(hi > lo))
            {
                return std::nullopt;
            }
            double const psi = 0.5 * (lo + hi);
            return in_regime(psi) ? std::optional<double>{psi} : std::nullopt;
        }

        struct Realised
        {
            DispatchResult dispatch;
            double surplus = 0.0;
        };

        Realised
        realise(Scenario const& s, std::size_t t, double g, double psi)
        {
            auto const& pm = s.period(t);
            auto const d = dispatch_for_generation(
                pm.utility, s.price(t), s.thresholds(t), pm.hours * g * psi);
            return {d, d.period_utility - d.period_payment};
        }

        double
        row_value(SignRow row, Realised const& r)
        {
            switch (row)
            {
                case SignRow::ConsumptionOwn:
                case SignRow::ConsumptionOther:
                    return r.dispatch.consumption;
                case SignRow::NetDemandOwn:
                case SignRow::NetDemandOther:
                    return r.dispatch.net_demand();
                case SignRow::Payment:
                    return r.dispatch.period_payment;
                case SignRow::Surplus:
                    return r.surplus;
            }
            return 0.0;
        }

        bool
        is_other(SignRow row)
        {
            return row == SignRow::ConsumptionOther || row == SignRow::NetDemandOther;
        }
    }

    SignTable
    sign_table(
        Scenario const& scenario,
        double c_g,
        double g_max,
        std::size_t tau,
        std::size_t other,
        SignTableOptions const& options)
    {
        if (tau >= scenario.size() || other >= scenario.size())
        {
            throw ValidationError("sign table period out of range");
        }
        SignTable table;
        table.tau = tau;
        table.other = other;
        table.investment = solve_capacity(scenario, c_g, g_max, options.solve);
        double const g0 = table.investment.g_star;
        bool const interior = table.investment.classification == Classification::Interior;

        constexpr std::array rows{
            SignRow::ConsumptionOwn,
            SignRow::NetDemandOwn,
            SignRow::ConsumptionOther,
            SignRow::NetDemandOther,
            SignRow::Payment,
            SignRow::Surplus,
        };
        constexpr std::array columns{
            Parameter::Kind::PvCost,
            Parameter::Kind::ImportPrice,
            Parameter::Kind::ExportPrice,
        };
        constexpr std::array regimes{Regime::Import, Regime::NetZero, Regime::Export};

        struct Side
        {
            Scenario scenario;
            double g = 0.0;
        };

        for (auto column : columns)
        {
            Parameter const p{column, tau};
            double const h = column == Parameter::Kind::PvCost ? options.cost_step
                                                                : options.price_step;
            std::optional<Side> plus;
            std::optional<Side> minus;
            std::string stencil_note;
            try
            {
                auto const sp = shift_parameter(scenario, c_g, p, h);
                auto const sm = shift_parameter(scenario, c_g, p, -h);
                auto const ip = solve_capacity(sp.scenario, sp.c_g, g_max, options.solve);
                auto const im = solve_capacity(sm.scenario, sm.c_g, g_max, options.solve);
                if (ip.classification != table.investment.classification
                    || im.classification != table.investment.classification)
                {
                    stencil_note = "non-local: investment classification changes";
                }
                plus = Side{sp.scenario, ip.g_star};
                minus = Side{sm.scenario, im.g_star};
            }
            catch (ValidationError const& e)
            {
                stencil_note = std::string{"non-local: "} + e.what();
            }
            if (stencil_note.empty() && interior && column != Parameter::Kind::PvCost)
            {
                // A price whose regime never occurs does not enter the
                // marginal value, so investment cannot respond to it.
                auto const q = expected_period_quantities(scenario, tau, g0).regimes;
                double const reach = column == Parameter::Kind::ImportPrice ? q.import : q.exported;
                if (reach <= 0.0)
                {
                    stencil_note = column == Parameter::Kind::ImportPrice
                                     ? "investment unaffected: period never imports"
                                     : "investment unaffected: period never exports";
                }
            }

            for (auto row : rows)
            {
                std::size_t const t = is_other(row) ? other : tau;
                for (auto regime : regimes)
                {
                    auto const expected = expected_sign(row, column, regime);
                    if (!expected)
                    {
                        continue;
                    }
                    SignCell cell;
                    cell.row = row;
                    cell.column = column;
                    cell.regime = regime;
                    cell.expected = *expected;
                    if (is_other(row) && other == tau)
                    {
                        cell.note = "no other period";
                        table.cells.push_back(cell);
                        continue;
                    }
                    if (!interior)
                    {
                        cell.note = std::string{"investment is "}
                                  + std::string{to_string(table.investment.classification)};
                        table.cells.push_back(cell);
                        continue;
                    }
                    auto const psi = representative_psi(
                        scenario.period(t), scenario.thresholds(t), g0, regime);
                    if (!psi)
                    {
                        cell.note = "regime not reachable";
                        table.cells.push_back(cell);
                        continue;
                    }
                    cell.psi = *psi;
                    if (!stencil_note.empty())
                    {
                        cell.note = stencil_note;
                        table.cells.push_back(cell);
                        continue;
                    }
                    auto const rp = realise(plus->scenario, t, plus->g, *psi);
                    auto const rm = realise(minus->scenario, t, minus->g, *psi);
                    if (rp.dispatch.regime != regime || rm.dispatch.regime != regime)
                    {
                        cell.note = "non-local: regime changes inside the stencil";
                        table.cells.push_back(cell);
                        continue;
                    }
                    double const vp = row_value(row, rp);
                    double const vm = row_value(row, rm);
                    double const scale = std::max({1.0, std::abs(vp), std::abs(vm)});
                    cell.difference = vp - vm;
                    if (std::abs(cell.difference) <= options.flat_tol * scale)
                    {
                        cell.empirical = Sign::Flat;
                    }
                    else
                    {
                        cell.empirical = cell.difference > 0.0 ? Sign::Up : Sign::Down;
                    }
                    table.cells.push_back(cell);
                }
            }
        }
        return table;
    }
}
