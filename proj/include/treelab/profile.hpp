#pragma once

// Separable test vectors 1 (x) h on Omega x R.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treelab/quadrature.hpp"

namespace treelab {

struct Interval
{
    double lo = 0.0;
    double hi = 1.0;

    Interval() = default;
    Interval(double lo_, double hi_) : lo(lo_), hi(hi_)
    {
        if (!std::isfinite(lo) || !std::isfinite(hi))
            throw std::invalid_argument("interval endpoints must be finite");
        if (!(hi > lo))
            throw std::invalid_argument("interval must satisfy lo < hi");
    }

    double length() const noexcept { return hi - lo; }
    bool contains(double t) const noexcept { return t >= lo && t <= hi; }

    friend bool operator==(Interval const&, Interval const&) = default;
};

// Lebesgue measure of (I + shift) intersected with J.
inline double shifted_overlap(Interval const& i, Interval const& j, double shift) noexcept
{
    double lo = std::max(i.lo + shift, j.lo);
    double hi = std::min(i.hi + shift, j.hi);
    return hi > lo ? hi - lo : 0.0;
}

// Squared L2 norm of 1/(1+t^2).
inline double cauchy_profile_norm_squared() { return 0.5 * std::numbers::pi; }

// Squared L2 norm of exp(-t^2).
inline double gaussian_profile_norm_squared() { return std::sqrt(0.5 * std::numbers::pi); }

enum class ProfileKind { window, cauchy, gaussian, indicator };
enum class Normalization { raw, unit };

class ProfileVector
{
  public:
    // 1 (x) 1_[-n,n] / sqrt(2n); unit norm by construction.
    static ProfileVector window(std::size_t n)
    {
        if (n == 0)
            throw std::invalid_argument("window half-width n must be >= 1");
        ProfileVector v(ProfileKind::window, Normalization::unit);
        v.n_ = n;
        auto half = static_cast<double>(n);
        v.interval_ = Interval(-half, half);
        return v;
    }
    static ProfileVector cauchy(Normalization norm = Normalization::unit)
    {
        return ProfileVector(ProfileKind::cauchy, norm);
    }
    static ProfileVector gaussian(Normalization norm = Normalization::unit)
    {
        return ProfileVector(ProfileKind::gaussian, norm);
    }
    static ProfileVector indicator(Interval i, Normalization norm = Normalization::raw)
    {
        ProfileVector v(ProfileKind::indicator, norm);
        v.interval_ = i;
        return v;
    }

    ProfileKind kind() const noexcept { return kind_; }
    Normalization normalization() const noexcept { return norm_; }
    std::size_t window_size() const noexcept { return n_; }

    bool is_interval_type() const noexcept
    {
        return kind_ == ProfileKind::window || kind_ == ProfileKind::indicator;
    }

    // Support set of an interval-type profile.
    Interval const& interval() const
    {
        if (!is_interval_type())
            throw std::invalid_argument("profile " + to_string() + " has no support interval");
        return interval_;
    }

    // Squared norm of the unscaled shape h.
    double shape_norm_squared() const
    {
        switch (kind_) {
        case ProfileKind::window:
        case ProfileKind::indicator:
            return interval_.length();
        case ProfileKind::cauchy:
            return cauchy_profile_norm_squared();
        case ProfileKind::gaussian:
            return gaussian_profile_norm_squared();
        }
        return 0.0;
    }

    // Multiplier applied to the shape h.
    double scale() const
    {
        if (kind_ == ProfileKind::window || norm_ == Normalization::unit)
            return 1.0 / std::sqrt(shape_norm_squared());
        return 1.0;
    }

    double norm() const { return scale() * std::sqrt(shape_norm_squared()); }

    // Applies the scales of xi and eta to a value computed for the shapes.
    // Pairing a normalized profile with itself divides by the squared norm so
    // that the identity gives exactly 1.
    static double scaled(ProfileVector const& xi, ProfileVector const& eta, double value)
    {
        if (xi == eta && (xi.kind_ == ProfileKind::window || xi.norm_ == Normalization::unit))
            return value / xi.shape_norm_squared();
        return xi.scale() * eta.scale() * value;
    }

    double shape(double t) const noexcept
    {
        switch (kind_) {
        case ProfileKind::window:
        case ProfileKind::indicator:
            return interval_.contains(t) ? 1.0 : 0.0;
        case ProfileKind::cauchy:
            return 1.0 / (1.0 + t * t);
        case ProfileKind::gaussian:
            return std::exp(-t * t);
        }
        return 0.0;
    }

    double operator()(double t) const { return scale() * shape(t); }

    std::string to_string() const
    {
        auto suffix = [&] { return norm_ == Normalization::raw ? std::string(":raw") : std::string(); };
        switch (kind_) {
        case ProfileKind::window:
            return "window:" + std::to_string(n_);
        case ProfileKind::cauchy:
            return "cauchy" + suffix();
        case ProfileKind::gaussian:
            return "gaussian" + suffix();
        case ProfileKind::indicator: {
            char buf[96];
            std::snprintf(buf, sizeof buf, "indicator:%.17g:%.17g", interval_.lo, interval_.hi);
            return buf + (norm_ == Normalization::unit ? std::string(":unit") : std::string());
        }
        }
        return {};
    }

    friend bool operator==(ProfileVector const&, ProfileVector const&) = default;

  private:
    ProfileVector(ProfileKind k, Normalization n) : kind_(k), norm_(n) {}

    ProfileKind kind_;
    Normalization norm_;
    std::size_t n_ = 0;
    Interval interval_;
};

// Inverse of ProfileVector::to_string: "window:<n>", "cauchy[:raw]",
// "gaussian[:raw]", "indicator:<lo>:<hi>[:unit]".
inline ProfileVector parse_profile(std::string_view text)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);

    auto to_double = [&](std::string const& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (std::exception const&) {
            used = 0;
        }
        if (used != s.size() || s.empty())
            throw std::invalid_argument("bad number '" + s + "' in profile '" + std::string(text) + "'");
        return v;
    };

    auto const& kind = parts[0];
    if (kind == "window" && parts.size() == 2) {
        double n = to_double(parts[1]);
        if (n < 1 || n != std::floor(n))
            throw std::invalid_argument("window size must be a positive integer");
        return ProfileVector::window(static_cast<std::size_t>(n));
    }
    if ((kind == "cauchy" || kind == "gaussian") && parts.size() <= 2) {
        Normalization norm = Normalization::unit;
        if (parts.size() == 2) {
            if (parts[1] == "raw")
                norm = Normalization::raw;
            else if (parts[1] != "unit")
                throw std::invalid_argument("unknown normalization '" + parts[1] + "'");
        }
        return kind == "cauchy" ? ProfileVector::cauchy(norm) : ProfileVector::gaussian(norm);
    }
    if (kind == "indicator" && (parts.size() == 3 || parts.size() == 4)) {
        Normalization norm = Normalization::raw;
        if (parts.size() == 4) {
            if (parts[3] == "unit")
                norm = Normalization::unit;
            else if (parts[3] != "raw")
                throw std::invalid_argument("unknown normalization '" + parts[3] + "'");
        }
        return ProfileVector::indicator(Interval(to_double(parts[1]), to_double(parts[2])), norm);
    }
    throw std::invalid_argument("unknown profile '" + std::string(text) + "'");
}

}  // namespace treelab
