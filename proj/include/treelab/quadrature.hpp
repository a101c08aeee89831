#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace treelab {

// Compensated summation.
class KahanSum
{
  public:
    void add(double x) noexcept
    {
        double y = x - carry_;
        double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const noexcept { return sum_; }

  private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

namespace detail {
template <class F>
double simpson_recurse(F const& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth)
{
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

// Adaptive Simpson with Richardson correction. The interval is first cut into
// `initial_panels` equal pieces so narrow features are not missed by the
// first five samples.
template <class F>
double adaptive_simpson(F const& f, double a, double b, double abs_tol = 1e-10,
                        int max_depth = 48, int initial_panels = 16)
{
    if (!(b > a))
        return 0.0;
    double h = (b - a) / initial_panels;
    double panel_tol = abs_tol / initial_panels;
    KahanSum total;
    for (int i = 0; i < initial_panels; ++i) {
        double lo = a + i * h;
        double hi = (i + 1 == initial_panels) ? b : lo + h;
        double mid = 0.5 * (lo + hi);
        double flo = f(lo), fmid = f(mid), fhi = f(hi);
        double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total.add(detail::simpson_recurse(f, lo, hi, flo, fmid, fhi, whole, panel_tol,
                                          max_depth));
    }
    return total.value();
}

// Integrates over [a, b] split at the given interior breakpoints (kinks of
// the integrand); breakpoints outside (a, b) are ignored.
template <class F>
double adaptive_simpson_split(F const& f, double a, double b, std::initializer_list<double> kinks,
                              double abs_tol = 1e-10)
{
    std::vector<double> cuts{a};
    std::vector<double> sorted(kinks);
    std::sort(sorted.begin(), sorted.end());
    for (double k : sorted)
        if (k > cuts.back() && k < b)
            cuts.push_back(k);
    cuts.push_back(b);
    double tol = abs_tol / static_cast<double>(cuts.size() - 1);
    KahanSum total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total.add(adaptive_simpson(f, cuts[i], cuts[i + 1], tol));
    return total.value();
}

}  // namespace treelab
