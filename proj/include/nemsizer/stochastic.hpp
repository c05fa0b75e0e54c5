#pragma once

#include "nemsizer/utility.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace nemsizer
{
    /// Distribution of a period's capacity factor psi on [0, psi_max].
    ///
    /// The clipped normal is the law of clamp(X, 0, psi_max) with
    /// X ~ N(mu, sigma): it has atoms at both ends of the support plus a
    /// continuous density in between. psi_max = 0 marks a non-generating
    /// period (psi is identically zero).
    class CapacityFactorDist
    {
      public:
        enum class Kind
        {
            PointMass,
            ClippedNormal,
        };

        static CapacityFactorDist point_mass(double value, double psi_max = 1.0);
        static CapacityFactorDist clipped_normal(double mu, double sigma, double psi_max = 1.0);
        static CapacityFactorDist non_generating();

        [[nodiscard]] Kind kind() const { return kind_; }
        [[nodiscard]] double mu() const { return mu_; }
        [[nodiscard]] double sigma() const { return sigma_; }
        [[nodiscard]] double psi_max() const { return psi_max_; }
        /// Location of the point mass (PointMass only).
        [[nodiscard]] double value() const { return mu_; }
        [[nodiscard]] bool generating() const;
        /// Largest value psi can take (the point itself for a point mass).
        [[nodiscard]] double support_max() const;

        /// P(psi = 0).
        [[nodiscard]] double lower_atom() const;
        /// P(psi = psi_max); for a point mass this is the whole mass when the
        /// point sits at psi_max.
        [[nodiscard]] double upper_atom() const;
        /// Density of the continuous part on (0, psi_max).
        [[nodiscard]] double density(double psi) const;
        /// P(psi < x).
        [[nodiscard]] double prob_below(double x) const;
        /// P(psi <= x).
        [[nodiscard]] double prob_at_or_below(double x) const;
        /// Draws one sample given a standard normal variate.
        [[nodiscard]] double from_standard_normal(double z) const;

      private:
        CapacityFactorDist() = default;

        Kind kind_ = Kind::PointMass;
        double mu_ = 0.0;
        double sigma_ = 0.0;
        double psi_max_ = 0.0;
    };

    /// Integrand for expectations over psi: `f` is smooth on every open
    /// interval between consecutive breakpoints and is evaluated directly at
    /// the atoms.
    struct PiecewiseIntegrand
    {
        std::vector<double> breakpoints;
        std::function<double(double)> f;
    };

    struct ExpectOptions
    {
        double abs_tol = 1e-9;
        int max_depth = 18;
    };

    /// E[f(psi)]: atoms plus adaptive 32-point Gauss-Legendre quadrature on
    /// each breakpoint-delimited segment. Throws NumericalError on a
    /// non-finite evaluation.
    double expect(
        CapacityFactorDist const& dist,
        PiecewiseIntegrand const& f,
        ExpectOptions const& options = {});

    struct McEstimate
    {
        double mean = 0.0;
        double std_error = 0.0;
    };

    /// Counter-based generator: output k of stream `seed` is the SplitMix64
    /// finaliser applied to hash(seed) + k*phi, so any sample can be
    /// regenerated from (seed, k) alone.
    class CounterRng
    {
      public:
        using result_type = std::uint64_t;

        explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0);

        static constexpr result_type min() { return 0; }
        static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
        result_type operator()();

        /// Seed for an independent child stream (e.g. one sweep task).
        [[nodiscard]] static std::uint64_t derive(std::uint64_t seed, std::uint64_t task);

      private:
        std::uint64_t key_;
        std::uint64_t counter_;
    };

    /// Seeded Monte Carlo estimate of E[f(psi)] with its standard error.
    /// Throws ValidationError for n < 2.
    McEstimate mc_expect(
        CapacityFactorDist const& dist,
        std::function<double(double)> const& f,
        std::size_t n,
        std::uint64_t seed);

    struct RegimeProbabilities
    {
        double import = 0.0;
        double net_zero = 0.0;
        double exported = 0.0;
    };

    /// Probabilities that generation psi*g falls below d_plus, within
    /// [d_plus, d_minus], or above d_minus.
    RegimeProbabilities regime_probabilities(
        CapacityFactorDist const& dist, double g, Thresholds const& th);

    /// Regime boundaries d_plus/g and d_minus/g in psi-space, clipped to the
    /// open support.
    std::vector<double> regime_breakpoints(
        CapacityFactorDist const& dist, double g, Thresholds const& th);

    double standard_normal_cdf(double x);
}
