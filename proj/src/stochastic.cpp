#include "nemsizer/stochastic.hpp"

#include "nemsizer/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace nemsizer
{
    namespace
    {
        constexpr int kOrder = 32;

        struct GaussLegendre
        {
            std::array<double, kOrder> nodes{};
            std::array<double, kOrder> weights{};
        };

        // Nodes on [-1, 1] by Newton iteration on P_n from the Chebyshev
        // initial guesses.
        GaussLegendre
        build_rule()
        {
            GaussLegendre rule;
            for (int i = 0; i < (kOrder + 1) / 2; ++i)
            {
                double x = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
                double dp = 0.0;
                for (int iter = 0; iter < 100; ++iter)
                {
                    double p0 = 1.0;
                    double p1 = x;
                    for (int k = 2; k <= kOrder; ++k)
                    {
                        double const pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                        p0 = p1;
                        p1 = pk;
                    }
                    dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
                    double const dx = p1 / dp;
                    x -= dx;
                    if (std::abs(dx) < 1e-16)
                    {
                        break;
                    }
                }
                double const w = 2.0 / ((1.0 - x * x) * dp * dp);
                rule.nodes[i] = -x;
                rule.weights[i] = w;
                rule.nodes[kOrder - 1 - i] = x;
                rule.weights[kOrder - 1 - i] = w;
            }
            return rule;
        }

        GaussLegendre const&
        rule32()
        {
            static GaussLegendre const rule = build_rule();
            return rule;
        }

        template <typename F>
        double
        gauss_segment(F const& g, double a, double b)
        {
            auto const& rule = rule32();
            double const half = 0.5 * (b - a);
            double const mid = 0.5 * (a + b);
            double sum = 0.0;
            for (int i = 0; i < kOrder; ++i)
            {
                double const x = mid + half * rule.nodes[i];
                double const v = g(x);
                if (!std::isfinite(v))
                {
                    std::ostringstream os;
                    os.precision(17);
                    os << "non-finite integrand on segment [" << a << ", " << b
                       << "] at psi=" << x;
                    throw NumericalError(os.str());
                }
                sum += rule.weights[i] * v;
            }
            return half * sum;
        }

        template <typename F>
        double
        adaptive(F const& g, double a, double b, double whole, double tol, int depth)
        {
            double const m = 0.5 * (a + b);
            double const left = gauss_segment(g, a, m);
            double const right = gauss_segment(g, m, b);
            double const refined = left + right;
            if (depth <= 0 || std::abs(refined - whole) <= tol)
            {
                return refined;
            }
            return adaptive(g, a, m, left, 0.5 * tol, depth - 1)
                 + adaptive(g, m, b, right, 0.5 * tol, depth - 1);
        }

        std::uint64_t
        mix64(std::uint64_t z)
        {
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            return z ^ (z >> 31);
        }

        double
        checked(double v, double psi)
        {
            if (!std::isfinite(v))
            {
                std::ostringstream os;
                os.precision(17);
                os << "non-finite integrand at atom psi=" << psi;
                throw NumericalError(os.str());
            }
            return v;
        }
    }

    double
    standard_normal_cdf(double x)
    {
        return 0.5 * std::erfc(-x / std::numbers::sqrt2);
    }

    CapacityFactorDist
    CapacityFactorDist::point_mass(double value, double psi_max)
    {
        if (!(psi_max > 0.0 && psi_max <= 1.0))
        {
            throw ValidationError("point mass needs psi_max in (0, 1]");
        }
        if (!(value >= 0.0 && value <= psi_max))
        {
            throw ValidationError("point mass location outside [0, psi_max]");
        }
        CapacityFactorDist d;
        d.kind_ = Kind::PointMass;
        d.mu_ = value;
        d.psi_max_ = psi_max;
        return d;
    }

    CapacityFactorDist
    CapacityFactorDist::clipped_normal(double mu, double sigma, double psi_max)
    {
        if (!(psi_max > 0.0 && psi_max <= 1.0))
        {
            throw ValidationError("clipped normal needs psi_max in (0, 1]");
        }
        if (!(sigma > 0.0) || !std::isfinite(sigma))
        {
            throw ValidationError("clipped normal needs sigma > 0");
        }
        if (!std::isfinite(mu))
        {
            throw ValidationError("clipped normal mean is not finite");
        }
        CapacityFactorDist d;
        d.kind_ = Kind::ClippedNormal;
        d.mu_ = mu;
        d.sigma_ = sigma;
        d.psi_max_ = psi_max;
        return d;
    }

    CapacityFactorDist
    CapacityFactorDist::non_generating()
    {
        CapacityFactorDist d;
        d.kind_ = Kind::PointMass;
        return d;
    }

    bool
    CapacityFactorDist::generating() const
    {
        if (psi_max_ <= 0.0)
        {
            return false;
        }
        return kind_ == Kind::ClippedNormal || mu_ > 0.0;
    }

    double
    CapacityFactorDist::support_max() const
    {
        return kind_ == Kind::PointMass ? mu_ : psi_max_;
    }

    double
    CapacityFactorDist::lower_atom() const
    {
        if (kind_ == Kind::PointMass)
        {
            return mu_ == 0.0 ? 1.0 : 0.0;
        }
        return standard_normal_cdf(-mu_ / sigma_);
    }

    double
    CapacityFactorDist::upper_atom() const
    {
        if (kind_ == Kind::PointMass)
        {
            return (psi_max_ > 0.0 && mu_ == psi_max_) ? 1.0 : 0.0;
        }
        return standard_normal_cdf((mu_ - psi_max_) / sigma_);
    }

    double
    CapacityFactorDist::density(double psi) const
    {
        if (kind_ == Kind::PointMass || psi <= 0.0 || psi >= psi_max_)
        {
            return 0.0;
        }
        double const z = (psi - mu_) / sigma_;
        return std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(2.0 * std::numbers::pi));
    }

    double
    CapacityFactorDist::prob_below(double x) const
    {
        if (kind_ == Kind::PointMass)
        {
            return mu_ < x ? 1.0 : 0.0;
        }
        if (x <= 0.0)
        {
            return 0.0;
        }
        if (x > psi_max_)
        {
            return 1.0;
        }
        return standard_normal_cdf((x - mu_) / sigma_);
    }

    double
    CapacityFactorDist::prob_at_or_below(double x) const
    {
        if (kind_ == Kind::PointMass)
        {
            return mu_ <= x ? 1.0 : 0.0;
        }
        if (x < 0.0)
        {
            return 0.0;
        }
        if (x >= psi_max_)
        {
            return 1.0;
        }
        return standard_normal_cdf((x - mu_) / sigma_);
    }

    double
    CapacityFactorDist::from_standard_normal(double z) const
    {
        if (kind_ == Kind::PointMass)
        {
            return mu_;
        }
        return std::clamp(mu_ + sigma_ * z, 0.0, psi_max_);
    }

    double
    expect(
        CapacityFactorDist const& dist,
        PiecewiseIntegrand const& f,
        ExpectOptions const& options)
    {
        if (dist.kind() == CapacityFactorDist::Kind::PointMass)
        {
            return checked(f.f(dist.value()), dist.value());
        }

        double const top = dist.psi_max();
        double total = 0.0;
        double const p0 = dist.lower_atom();
        double const p1 = dist.upper_atom();
        if (p0 > 0.0)
        {
            total += p0 * checked(f.f(0.0), 0.0);
        }
        if (p1 > 0.0)
        {
            total += p1 * checked(f.f(top), top);
        }

        // Caller breakpoints mark kinks; the extra points around the mean
        // keep the Gaussian bump from slipping between quadrature nodes.
        std::vector<double> cuts{0.0, top};
        for (double x : f.breakpoints)
        {
            if (x > 0.0 && x < top)
            {
                cuts.push_back(x);
            }
        }
        for (double k : {-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0})
        {
            double const x = dist.mu() + k * dist.sigma();
            if (x > 0.0 && x < top)
            {
                cuts.push_back(x);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

        auto weighted = [&](double psi) { return f.f(psi) * dist.density(psi); };
        double const tol = options.abs_tol / static_cast<double>(cuts.size() - 1);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        {
            double const a = cuts[i];
            double const b = cuts[i + 1];
            if (b <= a)
            {
                continue;
            }
            double const whole = gauss_segment(weighted, a, b);
            total += adaptive(weighted, a, b, whole, tol, options.max_depth);
        }
        return total;
    }

    CounterRng::CounterRng(std::uint64_t seed, std::uint64_t counter)
        : key_{mix64(seed ^ 0xD1B54A32D192ED03ULL)}
        , counter_{counter}
    {
    }

    CounterRng::result_type
    CounterRng::operator()()
    {
        ++counter_;
        return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    std::uint64_t
    CounterRng::derive(std::uint64_t seed, std::uint64_t task)
    {
        return mix64(seed ^ mix64(task + 0x632BE59BD9B4E019ULL));
    }

    McEstimate
    mc_expect(
        CapacityFactorDist const& dist,
        std::function<double(double)> const& f,
        std::size_t n,
        std::uint64_t seed)
    {
        if (n < 2)
        {
            throw ValidationError("Monte Carlo needs at least two samples");
        }
        CounterRng rng{seed};
        std::normal_distribution<double> normal{0.0, 1.0};
        // Welford running moments.
        double mean = 0.0;
        double m2 = 0.0;
        for (std::size_t k = 1; k <= n; ++k)
        {
            double const psi = dist.from_standard_normal(normal(rng));
            double const x = f(psi);
            double const delta = x - mean;
            mean += delta / static_cast<double>(k);
            m2 += delta * (x - mean);
        }
        double const variance = m2 / static_cast<double>(n - 1);
        return {mean, std::sqrt(variance / static_cast<double>(n))};
    }

    RegimeProbabilities
    regime_probabilities(CapacityFactorDist const& dist, double g, Thresholds const& th)
    {
        if (g < 0.0)
        {
            throw ValidationError("capacity must be non-negative");
        }
        RegimeProbabilities p;
        if (g == 0.0 || !dist.generating())
        {
            // Generation is identically zero.
            if (th.d_plus > 0.0)
            {
                p.import = 1.0;
            }
            else
            {
                p.net_zero = 1.0;
            }
            return p;
        }
        p.import = dist.prob_below(th.d_plus / g);
        p.exported = 1.0 - dist.prob_at_or_below(th.d_minus / g);
        p.net_zero = std::max(0.0, 1.0 - p.import - p.exported);
        return p;
    }

    std::vector<double>
    regime_breakpoints(CapacityFactorDist const& dist, double g, Thresholds const& th)
    {
        std::vector<double> out;
        if (g <= 0.0)
        {
            return out;
        }
        for (double d : {th.d_plus, th.d_minus})
        {
            double const x = d / g;
            if (x > 0.0 && x < dist.psi_max())
            {
                out.push_back(x);
            }
        }
        return out;
    }
}
