#pragma once

#include "nemsizer/tariff.hpp"

#include <concepts>

namespace nemsizer
{
    /// Quadratic per-period utility U(d) = a*d - (b/2)*d^2, the integral of a
    /// linear inverse-demand curve U'(d) = a - b*d.
    ///
    /// A period with no demand at all is represented by `satiated()`: every
    /// price maps to zero consumption and any positive consumption has
    /// unbounded disutility.
    class QuadraticUtility
    {
      public:
        /// Throws ValidationError unless a > 0 and b > 0.
        QuadraticUtility(double a, double b);

        static QuadraticUtility satiated(double a);

        [[nodiscard]] double a() const { return a_; }
        [[nodiscard]] double b() const { return b_; }
        [[nodiscard]] bool is_satiated() const { return satiated_; }
        /// Consumption at which marginal utility reaches zero.
        [[nodiscard]] double d_max() const { return satiated_ ? 0.0 : a_ / b_; }

        /// U(d); throws ValidationError for d < 0.
        [[nodiscard]] double value(double d) const;
        /// U'(d).
        [[nodiscard]] double marginal(double d) const;
        /// U''(d); constant for the quadratic family.
        [[nodiscard]] double curvature(double d) const;
        /// (U')^{-1}(price) clamped at zero consumption.
        [[nodiscard]] double inverse_marginal(double price) const;
        /// True when the price is at or above the choke price a.
        [[nodiscard]] bool chokes(double price) const { return price >= a_; }

      private:
        QuadraticUtility() = default;

        double a_ = 0.0;
        double b_ = 0.0;
        bool satiated_ = false;
    };

    /// What dispatch and sizing need from a utility family.
    template <typename U>
    concept ConcaveUtility = requires(U const& u, double x) {
        { u.value(x) } -> std::convertible_to<double>;
        { u.marginal(x) } -> std::convertible_to<double>;
        { u.curvature(x) } -> std::convertible_to<double>;
        { u.inverse_marginal(x) } -> std::convertible_to<double>;
    };
    static_assert(ConcaveUtility<QuadraticUtility>);

    /// Import/export consumption thresholds of one period.
    struct Thresholds
    {
        double d_plus = 0.0;  // consumption where U' equals the import price
        double d_minus = 0.0; // consumption where U' equals the export price
        bool import_choked = false;
    };

    inline double
    utility(QuadraticUtility const& u, double d)
    {
        return u.value(d);
    }

    inline double
    inverse_demand(QuadraticUtility const& u, double price)
    {
        return u.inverse_marginal(price);
    }

    Thresholds thresholds(QuadraticUtility const& u, PeriodPrice const& price);

    /// Linear demand through (pi0, d0) with point elasticity `elasticity`
    /// at that anchor. Throws ValidationError on non-positive d0 or pi0, or
    /// non-negative elasticity.
    QuadraticUtility calibrate(double d0, double pi0, double elasticity);
}
