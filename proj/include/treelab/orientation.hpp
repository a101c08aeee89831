#pragma once

// Random orientations of the Cayley tree, the integer cocycle they carry, and
// the skew-product action on orientations x R.
//
// Sign convention: an orientation value of +1 means the edge points away from
// the basepoint (the identity), -1 means it points toward it. Under the
// Bernoulli measure each edge independently points toward the basepoint with
// probability p. Along a geodesic, an edge contributes travel * value, so
// coherent edges count +1 and incoherent edges -1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "treelab/group.hpp"
#include "treelab/quadrature.hpp"
#include "treelab/random.hpp"

namespace treelab {

struct OrientationMeasure
{
    double p = 0.7;
    int rank = 2;

    OrientationMeasure() = default;
    OrientationMeasure(double p_, int rank_) : p(p_), rank(rank_)
    {
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("orientation bias p must lie in (0,1), got " +
                                        std::to_string(p));
        if (rank < 1 || rank > 26)
            throw std::invalid_argument("rank must be in 1..26");
    }

    // p = 1/2 gives a recurrent path sum; coefficients then decay only
    // polynomially and the cocycle is not proper almost surely.
    bool is_transient() const noexcept { return p != 0.5; }

    friend bool operator==(OrientationMeasure const&, OrientationMeasure const&) = default;
};

namespace detail {
inline constexpr std::uint64_t kEdgeSalt = 0x5f0e1d2c3b4a6978ULL;

inline std::uint64_t edge_key_start(std::uint64_t seed) noexcept { return mix64(seed ^ kEdgeSalt); }

inline std::uint64_t edge_key_extend(std::uint64_t h, Letter l) noexcept
{
    return combine(h, static_cast<std::uint8_t>(l));
}

// Keyed by the far endpoint, which determines the edge.
inline std::uint64_t edge_key(std::uint64_t seed, CanonicalEdge const& e) noexcept
{
    std::uint64_t h = edge_key_start(seed);
    for (Letter l : e.parent.letters())
        h = edge_key_extend(h, l);
    return edge_key_extend(h, e.step);
}

inline int bernoulli_sign(std::uint64_t key, double p) noexcept { return to_unit(key) < p ? -1 : +1; }
}  // namespace detail

// An orientation sampled from the Bernoulli measure, possibly transported by
// a group element and with explicit per-edge overrides. Values are computed
// on demand; the object never materializes the infinite tree.
class Orientation
{
  public:
    Orientation(std::uint64_t seed, OrientationMeasure measure)
        : seed_(seed),
          measure_(measure),
          translate_(measure.rank),
          translate_inverse_(measure.rank)
    {
    }

    std::uint64_t seed() const noexcept { return seed_; }
    OrientationMeasure const& measure() const noexcept { return measure_; }
    GroupWord const& translation() const noexcept { return translate_; }
    std::map<CanonicalEdge, int> const& overrides() const noexcept { return overrides_; }

    int value(CanonicalEdge const& e) const
    {
        if (!overrides_.empty()) {
            if (auto it = overrides_.find(e); it != overrides_.end())
                return it->second;
        }
        if (translate_.is_identity())
            return base_value(e);
        auto image = act_on_edge(translate_inverse_, e);
        return image.flip * base_value(image.edge);
    }

    // The untransported Bernoulli sample.
    int base_value(CanonicalEdge const& e) const
    {
        return detail::bernoulli_sign(detail::edge_key(seed_, e), measure_.p);
    }

    Orientation with_override(CanonicalEdge const& e, int v) const
    {
        if (v != 1 && v != -1)
            throw std::invalid_argument("orientation values are +1 or -1");
        Orientation out = *this;
        out.overrides_[e] = v;
        return out;
    }

    // (g.omega)(e) = flip(g^-1, e) * omega(g^-1 e).
    friend Orientation pushforward(GroupWord const& g, Orientation const& omega)
    {
        require_same_rank(g, omega.translate_);
        Orientation out(omega.seed_, omega.measure_);
        out.translate_ = g * omega.translate_;
        out.translate_inverse_ = inverse(out.translate_);
        for (auto const& [edge, v] : omega.overrides_) {
            auto image = act_on_edge(g, edge);
            out.overrides_[image.edge] = image.flip * v;
        }
        return out;
    }

  private:
    std::uint64_t seed_;
    OrientationMeasure measure_;
    GroupWord translate_;
    GroupWord translate_inverse_;
    std::map<CanonicalEdge, int> overrides_;
};

inline int orientation_value(Orientation const& omega, CanonicalEdge const& e)
{
    return omega.value(e);
}

// c(x,y)(omega): coherent minus incoherent edges along [x,y].
inline long path_cocycle(Orientation const& omega, GroupWord const& x, GroupWord const& y)
{
    long c = 0;
    for (auto const& s : geodesic(x, y).steps)
        c += s.travel * omega.value(s.edge);
    return c;
}

// c(g, omega) = c(e, g e)(omega).
inline long group_cocycle(Orientation const& omega, GroupWord const& g)
{
    require_same_rank(g, omega.translation());
    if (omega.translation().is_identity() && omega.overrides().empty()) {
        // Outward ray from the root: every step travels with the reference.
        long c = 0;
        std::uint64_t h = detail::edge_key_start(omega.seed());
        for (Letter l : g.letters()) {
            h = detail::edge_key_extend(h, l);
            c += detail::bernoulli_sign(h, omega.measure().p);
        }
        return c;
    }
    return path_cocycle(omega, GroupWord(g.rank()), g);
}

//---------------------------------------------------------------------------//
// Skew product on orientations x R

struct SkewPoint
{
    Orientation orientation;
    double t = 0.0;
};

// beta_g(omega, t) = (g.omega, t + c(g^-1, omega)).
inline SkewPoint skew_step(GroupWord const& g, SkewPoint const& pt)
{
    return {pushforward(g, pt.orientation),
            pt.t + static_cast<double>(group_cocycle(pt.orientation, inverse(g)))};
}

// Real coordinate of beta_g(omega, t) without building the transported
// orientation; the Monte Carlo estimators only need this.
inline double skew_shift(GroupWord const& g, Orientation const& omega)
{
    return static_cast<double>(group_cocycle(omega, inverse(g)));
}

//---------------------------------------------------------------------------//
// Exact law of the path sum along an outward geodesic

class PathSumLaw
{
  public:
    // q is the probability that a single edge contributes -1.
    PathSumLaw(std::size_t length, double q) : length_(length), q_(q), pmf_(length + 1)
    {
        if (!(q >= 0.0 && q <= 1.0))
            throw std::invalid_argument("path-sum edge probability must lie in [0,1]");
        // C(L, j) q^j (1-q)^(L-j), building C(L, j) incrementally.
        double binom = 1.0;
        for (std::size_t j = 0; j <= length; ++j) {
            if (j > 0)
                binom = binom * static_cast<double>(length - j + 1) / static_cast<double>(j);
            pmf_[j] = binom * std::pow(q, static_cast<double>(j)) *
                      std::pow(1.0 - q, static_cast<double>(length - j));
        }
    }

    std::size_t length() const noexcept { return length_; }
    double q() const noexcept { return q_; }

    // Index j carries the value L - 2j.
    std::vector<double> const& pmf() const noexcept { return pmf_; }
    long value_at(std::size_t j) const noexcept
    {
        return static_cast<long>(length_) - 2 * static_cast<long>(j);
    }

    double probability(long s) const noexcept
    {
        long diff = static_cast<long>(length_) - s;
        if (diff < 0 || diff % 2 != 0 || diff / 2 > static_cast<long>(length_))
            return 0.0;
        return pmf_[static_cast<std::size_t>(diff / 2)];
    }

    template <class F>
    double expectation(F&& f) const
    {
        KahanSum sum;
        for (std::size_t j = 0; j <= length_; ++j)
            sum.add(pmf_[j] * f(value_at(j)));
        return sum.value();
    }

    double total_mass() const
    {
        return expectation([](long) { return 1.0; });
    }
    double mean() const
    {
        return expectation([](long s) { return static_cast<double>(s); });
    }

  private:
    std::size_t length_;
    double q_;
    std::vector<double> pmf_;
};

// Law of c(g, .) for |g| = L under the Bernoulli measure with bias p.
inline PathSumLaw path_sum_law(std::size_t length, double p) { return PathSumLaw(length, p); }

inline double window_kernel(long s, std::size_t n)
{
    double width = 2.0 * static_cast<double>(n);
    double overlap = width - std::abs(static_cast<double>(s));
    return overlap > 0.0 ? overlap / width : 0.0;
}

inline double exact_window_coefficient(std::size_t word_length, std::size_t n, double p)
{
    if (n == 0)
        throw std::invalid_argument("window half-width n must be >= 1");
    return path_sum_law(word_length, p).expectation([n](long s) { return window_kernel(s, n); });
}

// <pi(g) xi_n, xi_n> for xi_n = 1 (x) 1_[-n,n] / sqrt(2n).
inline double exact_window_coefficient(GroupWord const& g, std::size_t n, double p)
{
    return exact_window_coefficient(g.length(), n, p);
}

// 1 - <pi(g) xi_n, xi_n> as E[min(|S|, 2n)] / 2n, free of cancellation near 1.
inline double exact_window_defect(std::size_t word_length, std::size_t n, double p)
{
    if (n == 0)
        throw std::invalid_argument("window half-width n must be >= 1");
    double width = 2.0 * static_cast<double>(n);
    double mean = path_sum_law(word_length, p).expectation([width](long s) {
        return std::min(std::abs(static_cast<double>(s)), width);
    });
    return mean / width;
}

inline double exact_gaussian_bound(std::size_t word_length, double p)
{
    return path_sum_law(word_length, p).expectation([](long s) {
        double x = static_cast<double>(s);
        return std::exp(-0.5 * x * x);
    });
}

// E[exp(-c(g, omega)^2 / 2)]; equals the unit-normalized coefficient of
// 1 (x) exp(-t^2).
inline double exact_gaussian_bound(GroupWord const& g, double p)
{
    return exact_gaussian_bound(g.length(), p);
}

}  // namespace treelab
