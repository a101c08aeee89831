#pragma once

// Finite marginals of the Gaussian functor applied to the tree cocycle.
//
// For the Cayley tree embedded so that squared Hilbert distance equals the
// word metric, the cocycle vectors satisfy <c(g), c(h)> = (|g| + |h| - |h^-1 g|)/2,
// the Gromov product at the identity. The Gaussian variables c(g)^ are then
// jointly centered normal with this covariance. Every matrix coefficient of a
// profile 1 (x) h depends only on the law of one such variable, Normal(0, |g|).

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "treelab/group.hpp"
#include "treelab/profile.hpp"
#include "treelab/quadrature.hpp"
#include "treelab/random.hpp"

namespace treelab {

struct CocycleLaw
{
    double sigma = 0.0;

    static CocycleLaw of(GroupWord const& g)
    {
        return {std::sqrt(static_cast<double>(g.length()))};
    }
    double variance() const noexcept { return sigma * sigma; }
};

inline double gromov_product(GroupWord const& g, GroupWord const& h)
{
    auto sum = static_cast<double>(g.length() + h.length());
    return 0.5 * (sum - static_cast<double>(distance(g, h)));
}

class GaussianSystem
{
  public:
    static constexpr double kMaxJitter = 1e-9;

    explicit GaussianSystem(std::vector<GroupWord> words) : words_(std::move(words))
    {
        if (words_.empty())
            throw std::invalid_argument("Gaussian system needs at least one word");
        std::set<GroupWord> seen;
        for (auto const& w : words_) {
            require_same_rank(w, words_.front());
            if (!seen.insert(w).second)
                throw std::invalid_argument("duplicate word " + w.to_string() + " in Gaussian system");
        }

        auto n = static_cast<Eigen::Index>(words_.size());
        gram_.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j <= i; ++j)
                gram_(i, j) = gram_(j, i) = gromov_product(words_[i], words_[j]);

        factorize();
    }

    std::vector<GroupWord> const& words() const noexcept { return words_; }
    std::size_t size() const noexcept { return words_.size(); }
    Eigen::MatrixXd const& gram() const noexcept { return gram_; }
    Eigen::MatrixXd const& cholesky() const noexcept { return chol_; }
    double jitter() const noexcept { return jitter_; }

    // One joint draw of (c(g_1)^, ..., c(g_m)^).
    std::vector<double> sample(std::uint64_t seed) const
    {
        CounterStream rng(combine(seed, 0x6a09e667f3bcc909ULL));
        auto n = chol_.rows();
        Eigen::VectorXd z(n);
        for (Eigen::Index i = 0; i < n; ++i)
            z(i) = rng.normal();
        Eigen::VectorXd x = chol_.triangularView<Eigen::Lower>() * z;
        return {x.data(), x.data() + n};
    }

  private:
    // Cholesky that tolerates exact zero pivots (the identity word has zero
    // variance), retried with growing diagonal jitter up to kMaxJitter.
    void factorize()
    {
        if (try_factorize(0.0))
            return;
        for (double j = 1e-15; j <= kMaxJitter * 1.0000001; j *= 10.0) {
            if (try_factorize(j)) {
                jitter_ = j;
                return;
            }
        }
        throw std::runtime_error("Gram matrix is not positive semidefinite within jitter 1e-9");
    }

    bool try_factorize(double jitter)
    {
        auto n = gram_.rows();
        chol_ = Eigen::MatrixXd::Zero(n, n);
        double scale = std::max(1.0, gram_.diagonal().maxCoeff());
        double tol = 1e-12 * scale;
        for (Eigen::Index j = 0; j < n; ++j) {
            double d = gram_(j, j) + jitter;
            for (Eigen::Index k = 0; k < j; ++k)
                d -= chol_(j, k) * chol_(j, k);
            if (d > tol) {
                double piv = std::sqrt(d);
                chol_(j, j) = piv;
                for (Eigen::Index i = j + 1; i < n; ++i) {
                    double s = gram_(i, j);
                    for (Eigen::Index k = 0; k < j; ++k)
                        s -= chol_(i, k) * chol_(j, k);
                    chol_(i, j) = s / piv;
                }
            } else if (d >= -tol) {
                // Zero pivot: the column must already be explained.
                for (Eigen::Index i = j + 1; i < n; ++i) {
                    double s = gram_(i, j);
                    for (Eigen::Index k = 0; k < j; ++k)
                        s -= chol_(i, k) * chol_(j, k);
                    if (std::abs(s) > tol)
                        return false;
                }
            } else {
                return false;
            }
        }
        return true;
    }

    std::vector<GroupWord> words_;
    Eigen::MatrixXd gram_;
    Eigen::MatrixXd chol_;
    double jitter_ = 0.0;
};

inline GaussianSystem gram_matrix(std::vector<GroupWord> words)
{
    return GaussianSystem(std::move(words));
}

inline std::vector<double> sample_cocycle_vector(GaussianSystem const& sys, std::uint64_t seed)
{
    return sys.sample(seed);
}

// Eigen-solver check of positive semidefiniteness.
inline double min_eigenvalue(Eigen::MatrixXd const& symmetric)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

//---------------------------------------------------------------------------//
// Closed forms and their quadrature counterparts. X ~ Normal(0, sigma^2).

inline double normal_density(double x, double sigma)
{
    double z = x / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

// E[f(X)] by adaptive Simpson on [-8 sigma, 8 sigma].
template <class F>
double gaussian_expectation(F const& f, double sigma, std::initializer_list<double> kinks = {},
                            double abs_tol = 1e-10)
{
    if (sigma == 0.0)
        return f(0.0);
    auto integrand = [&](double x) { return normal_density(x, sigma) * f(x); };
    return adaptive_simpson_split(integrand, -8.0 * sigma, 8.0 * sigma, kinks, abs_tol);
}

// (1/2n) E[max(2n - |X|, 0)].
inline double gaussian_window_coefficient(double sigma, std::size_t n)
{
    if (sigma < 0.0)
        throw std::invalid_argument("sigma must be >= 0");
    if (n == 0)
        throw std::invalid_argument("window half-width n must be >= 1");
    if (sigma == 0.0)
        return 1.0;
    double width = 2.0 * static_cast<double>(n);
    double ratio = width / sigma;
    double mass = std::erf(ratio / std::numbers::sqrt2);
    double abs_part = sigma * std::sqrt(2.0 / std::numbers::pi) * -std::expm1(-0.5 * ratio * ratio);
    return (width * mass - abs_part) / width;
}

inline double gaussian_window_coefficient_quadrature(double sigma, std::size_t n)
{
    double width = 2.0 * static_cast<double>(n);
    return gaussian_expectation(
        [width](double x) {
            double v = width - std::abs(x);
            return v > 0.0 ? v / width : 0.0;
        },
        sigma, {-width, 0.0, width});
}

// K(x) = integral of h(t) h(t + x) dt for h(t) = 1/(1+t^2), computed after the
// substitution t = tan(theta), split at the peak theta = atan(-x).
inline double cauchy_autocorrelation_quadrature(double x, double abs_tol = 1e-13)
{
    auto f = [x](double th) {
        double u = std::tan(th) + x;
        return 1.0 / (1.0 + u * u);
    };
    double half_pi = 0.5 * std::numbers::pi;
    return adaptive_simpson_split(f, -half_pi, half_pi, {std::atan(-x)}, abs_tol);
}

// The convolution of two Cauchy kernels; checked against the quadrature above
// by the test suite.
inline double cauchy_autocorrelation(double x) { return 2.0 * std::numbers::pi / (4.0 + x * x); }

// E[K(X)] for the raw profile 1/(1+t^2); equals pi/2 at sigma = 0.
inline double cauchy_coefficient(double sigma)
{
    if (sigma < 0.0)
        throw std::invalid_argument("sigma must be >= 0");
    return gaussian_expectation(cauchy_autocorrelation, sigma, {0.0});
}

// E[sqrt(pi/2) exp(-X^2/2)] for the raw profile exp(-t^2).
inline double gaussian_profile_coefficient(double sigma)
{
    if (sigma < 0.0)
        throw std::invalid_argument("sigma must be >= 0");
    return std::sqrt(0.5 * std::numbers::pi) / std::sqrt(1.0 + sigma * sigma);
}

namespace detail {
// E[max(X - m, 0)].
inline double expected_ramp(double m, double sigma)
{
    if (sigma == 0.0)
        return m < 0.0 ? -m : 0.0;
    double z = m / sigma;
    double tail = 0.5 * std::erfc(z / std::numbers::sqrt2);
    return sigma * std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi) - m * tail;
}
}  // namespace detail

// E[lambda((I + X) n J)]. The overlap is a trapezoid in X, i.e. a signed sum
// of four ramps, each of which has a Gaussian-smoothed closed form.
inline double interval_overlap_measure(double sigma, Interval const& i, Interval const& j)
{
    if (sigma < 0.0)
        throw std::invalid_argument("sigma must be >= 0");
    if (sigma == 0.0)
        return shifted_overlap(i, j, 0.0);
    using detail::expected_ramp;
    double v = expected_ramp(j.lo - i.hi, sigma) - expected_ramp(j.lo - i.lo, sigma) -
               expected_ramp(j.hi - i.hi, sigma) + expected_ramp(j.hi - i.lo, sigma);
    return v > 0.0 ? v : 0.0;
}

inline double interval_overlap_measure(GroupWord const& g, Interval const& i, Interval const& j)
{
    return interval_overlap_measure(CocycleLaw::of(g).sigma, i, j);
}

inline double interval_overlap_measure_quadrature(double sigma, Interval const& i,
                                                  Interval const& j)
{
    return gaussian_expectation([&](double x) { return shifted_overlap(i, j, x); }, sigma,
                                {j.lo - i.hi, j.lo - i.lo, j.hi - i.hi, j.hi - i.lo});
}

// <pi(g) xi, xi> for xi = 1 (x) h in the Gaussian skew product, with the
// profile's own normalization.
inline double gaussian_skew_coefficient(GroupWord const& g, ProfileVector const& profile)
{
    double sigma = CocycleLaw::of(g).sigma;
    auto scaled = [&](double v) { return ProfileVector::scaled(profile, profile, v); };
    switch (profile.kind()) {
    case ProfileKind::window:
        return gaussian_window_coefficient(sigma, profile.window_size());
    case ProfileKind::indicator:
        return scaled(interval_overlap_measure(sigma, profile.interval(), profile.interval()));
    case ProfileKind::cauchy:
        return scaled(cauchy_coefficient(sigma));
    case ProfileKind::gaussian:
        return scaled(gaussian_profile_coefficient(sigma));
    }
    throw std::invalid_argument("unknown profile");
}

}  // namespace treelab
