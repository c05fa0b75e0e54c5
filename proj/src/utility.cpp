#include "nemsizer/utility.hpp"

#include "nemsizer/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace nemsizer
{
    QuadraticUtility::QuadraticUtility(double a, double b)
        : a_{a}
        , b_{b}
    {
        if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        {
            throw ValidationError(
                "quadratic utility needs a > 0 and b > 0 (got a="
                + std::to_string(a) + ", b=" + std::to_string(b) + ")");
        }
    }

    QuadraticUtility
    QuadraticUtility::satiated(double a)
    {
        QuadraticUtility u;
        u.a_ = a;
        u.b_ = std::numeric_limits<double>::infinity();
        u.satiated_ = true;
        return u;
    }

    double
    QuadraticUtility::value(double d) const
    {
        if (d < 0.0)
        {
            throw ValidationError(
                "utility evaluated at negative consumption " + std::to_string(d));
        }
        if (satiated_)
        {
            return d == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
        }
        return a_ * d - 0.5 * b_ * d * d;
    }

    double
    QuadraticUtility::marginal(double d) const
    {
        if (satiated_)
        {
            return d == 0.0 ? a_ : -std::numeric_limits<double>::infinity();
        }
        return a_ - b_ * d;
    }

    double
    QuadraticUtility::curvature(double) const
    {
        return -b_;
    }

    double
    QuadraticUtility::inverse_marginal(double price) const
    {
        if (satiated_ || price >= a_)
        {
            return 0.0;
        }
        return (a_ - price) / b_;
    }

    Thresholds
    thresholds(QuadraticUtility const& u, PeriodPrice const& price)
    {
        Thresholds th;
        th.d_plus = u.inverse_marginal(price.import_price);
        th.d_minus = u.inverse_marginal(price.export_price);
        th.import_choked = u.chokes(price.import_price);
        if (th.d_plus > th.d_minus)
        {
            throw NumericalError("import threshold above export threshold");
        }
        return th;
    }

    QuadraticUtility
    calibrate(double d0, double pi0, double elasticity)
    {
        if (!(d0 > 0.0) || !std::isfinite(d0))
        {
            throw ValidationError("calibration needs positive anchor consumption");
        }
        if (!(pi0 > 0.0) || !std::isfinite(pi0))
        {
            throw ValidationError("calibration needs a positive anchor price");
        }
        if (elasticity == 0.0)
        {
            throw ValidationError("zero elasticity gives an infinite demand slope");
        }
        if (!(elasticity < 0.0) || !std::isfinite(elasticity))
        {
            throw ValidationError("calibration needs a negative elasticity");
        }
        double const b = -pi0 / (elasticity * d0);
        double const a = pi0 + b * d0;
        return QuadraticUtility{a, b};
    }
}
