#pragma once

// Invariant suite run by `treelab selftest`. Budgets are smaller than the
// acceptance suite so the whole run stays well under a minute.

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "treelab/gaussian.hpp"
#include "treelab/generators.hpp"
#include "treelab/group.hpp"
#include "treelab/hs.hpp"
#include "treelab/koopman.hpp"
#include "treelab/orientation.hpp"

namespace treelab {

struct SuiteResult
{
    std::string name;
    bool passed = true;
    std::string detail;
    double seconds = 0.0;
};

struct SelfTestSuite
{
    std::string name;
    // Returns an empty string on success, otherwise the failed identity.
    std::function<std::string()> run;
};

namespace selftest_detail {

inline std::string group_axioms()
{
    CounterStream rng(11);
    for (int i = 0; i < 1000; ++i) {
        auto a = random_word(rng, 2, 12);
        auto b = random_word(rng, 2, 12);
        auto c = random_word(rng, 2, 12);
        if ((a * b) * c != a * (b * c))
            return "associativity";
        if (a * GroupWord(2) != a || GroupWord(2) * a != a)
            return "identity law";
        if (!(a * inverse(a)).is_identity())
            return "inverse law";
        if (distance(c * a, c * b) != distance(a, b))
            return "isometric action";
        if (distance(a, c) > distance(a, b) + distance(b, c))
            return "triangle inequality";
    }
    return {};
}

inline std::string edge_action()
{
    CounterStream rng(12);
    for (int i = 0; i < 1000; ++i) {
        auto g = random_word(rng, 2, 8);
        auto h = random_word(rng, 2, 8);
        auto e = random_edge(rng, 2, 8);
        auto inner_img = act_on_edge(h, e);
        auto outer_img = act_on_edge(g, inner_img.edge);
        auto direct = act_on_edge(g * h, e);
        if (direct.edge != outer_img.edge || direct.flip != inner_img.flip * outer_img.flip)
            return "edge action composition law";
    }
    return {};
}

inline std::string cocycle_identities()
{
    CounterStream rng(13);
    for (int i = 0; i < 1000; ++i) {
        double p = i % 3 == 0 ? 0.3 : (i % 3 == 1 ? 0.5 : 0.7);
        Orientation omega(rng.next_u64(), OrientationMeasure(p, 2));
        auto g = random_word(rng, 2, 8);
        auto h = random_word(rng, 2, 8);
        auto z = random_word(rng, 2, 8);
        if (group_cocycle(omega, g * h) !=
            group_cocycle(omega, g) + group_cocycle(pushforward(inverse(g), omega), h))
            return "cocycle chain rule c(gh,w) = c(g,w) + c(h,g^-1 w)";
        if (path_cocycle(omega, g, z) != path_cocycle(omega, g, h) + path_cocycle(omega, h, z))
            return "path cocycle additivity";
    }
    return {};
}

inline std::string skew_action_law()
{
    CounterStream rng(14);
    auto edges = ball(5, 2);
    for (int i = 0; i < 200; ++i) {
        Orientation omega(rng.next_u64(), OrientationMeasure(0.7, 2));
        auto g = random_word(rng, 2, 6);
        auto h = random_word(rng, 2, 6);
        SkewPoint pt{omega, static_cast<double>(static_cast<long>(uniform_below(rng, 41)) - 20)};
        auto lhs = skew_step(g * h, pt);
        auto rhs = skew_step(g, skew_step(h, pt));
        if (lhs.t != rhs.t)
            return "skew action law (real coordinate)";
        for (auto const& v : edges) {
            if (v.is_identity())
                continue;
            CanonicalEdge e(v.prefix(v.length() - 1), v.back());
            if (lhs.orientation.value(e) != rhs.orientation.value(e))
                return "skew action law (orientation coordinate)";
        }
    }
    return {};
}

inline std::string window_exact_vs_mc()
{
    CounterStream rng(15);
    for (int i = 0; i < 10; ++i) {
        auto g = random_word(rng, 2, 10);
        std::size_t n = 1 + uniform_below(rng, 20);
        double p = 0.2 + 0.6 * rng.uniform();
        auto sys = SystemSpec::orientation(p);
        auto xi = ProfileVector::window(n);
        double exact = coefficient(sys, g, xi, xi).value;
        auto mc = coefficient(sys, g, xi, xi,
                              {20000, rng.next_u64(), 1, MethodPreference::monte_carlo});
        if (std::abs(exact - mc.value) > 4.0 * mc.stderr_ + 1e-12)
            return "window coefficient exact vs Monte Carlo";
        if (1.0 - exact > static_cast<double>(g.length()) / (2.0 * static_cast<double>(n)) + 1e-15)
            return "window defect bound |g|/(2n)";
    }
    return {};
}

inline std::string gaussian_decay()
{
    double prev = 1.0;
    for (std::size_t len = 1; len <= 20; ++len) {
        double v = exact_gaussian_bound(len, 0.7);
        if (!(v < prev))
            return "strict decay of E[exp(-S^2/2)] at p=0.7";
        prev = v;
    }
    if (!(prev < 0.05))
        return "E[exp(-S_20^2/2)] < 0.05 at p=0.7";
    if (!(exact_gaussian_bound(20, 0.5) > prev))
        return "recurrent case p=1/2 decays slower";
    return {};
}

inline std::string gaussian_closed_forms()
{
    for (double sigma : {0.5, 1.0, 3.0})
        for (std::size_t n : {1u, 5u, 100u}) {
            double cf = gaussian_window_coefficient(sigma, n);
            double q = gaussian_window_coefficient_quadrature(sigma, n);
            if (std::abs(cf - q) > 1e-9)
                return "window closed form vs quadrature";
            if (cf > 1.0)
                return "window coefficient <= 1";
        }
    for (double x : {0.0, 1.0, 5.0, 20.0})
        if (std::abs(cauchy_autocorrelation_quadrature(x) * (4.0 + x * x) - 2.0 * std::numbers::pi) > 1e-8)
            return "Cauchy convolution identity K(x)(4+x^2) = 2 pi";
    double prev = cauchy_coefficient(0.0);
    for (double s : {1.0, 2.0, 4.0, 8.0}) {
        double v = cauchy_coefficient(s);
        if (!(v < prev))
            return "Cauchy coefficient decreasing in sigma";
        prev = v;
    }
    return {};
}

inline std::string gram_cholesky()
{
    GaussianSystem sys(ball(4, 2));
    if (min_eigenvalue(sys.gram()) < -1e-8)
        return "Gram matrix positive semidefinite";
    Eigen::MatrixXd rec = sys.cholesky() * sys.cholesky().transpose();
    Eigen::MatrixXd target =
        sys.gram() + sys.jitter() * Eigen::MatrixXd::Identity(sys.gram().rows(), sys.gram().cols());
    if ((rec - target).cwiseAbs().maxCoeff() > 1e-10)
        return "Cholesky reconstruction";
    return {};
}

inline std::string projection_defect_identity()
{
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
        auto dim = static_cast<Eigen::Index>(2 + trial % 15);
        auto u = hs::random_orthogonal(dim, 1000 + trial);
        auto xi = hs::random_real_unit_vector(dim, 5000 + trial);
        if (std::abs(hs::projection_defect(u, xi) - hs::projection_defect_closed_form(u, xi)) > 1e-10)
            return "projection defect identity ||UPU*-P||^2 = 2(1-Re<U xi,xi>^2)";
        auto v = hs::random_unitary(dim, 3000 + trial);
        auto zeta = hs::random_unit_vector(dim, 4000 + trial);
        if (std::abs(hs::projection_defect(v, zeta) - hs::projection_defect_modulus_form(v, zeta)) > 1e-10)
            return "projection defect identity ||UPU*-P||^2 = 2(1-|<U xi,xi>|^2)";
    }
    hs::Vector e1 = hs::Vector::Zero(2);
    e1(0) = 1.0;
    if (std::abs(hs::projection_defect(hs::FiniteUnitary::rotation(std::numbers::pi / 4), e1) - 1.0) > 1e-12)
        return "projection defect identity (rotation by pi/4)";
    return {};
}

inline std::string hs_coefficient_bound()
{
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
        auto dim = static_cast<Eigen::Index>(2 + trial % 15);
        auto u = hs::random_unitary(dim, 7000 + trial);
        auto x1 = hs::random_gaussian_vector(dim, 8000 + trial);
        auto y1 = hs::random_gaussian_vector(dim, 9000 + trial);
        auto x2 = hs::random_gaussian_vector(dim, 10000 + trial);
        auto y2 = hs::random_gaussian_vector(dim, 11000 + trial);
        double lhs = std::abs(hs::hs_coefficient(hs::rank_one(x1, y1), hs::rank_one(x2, y2), u));
        double rhs = std::abs(hs::inner(u.apply(y2), y1)) * x1.norm() * x2.norm();
        if (lhs > rhs + 1e-10)
            return "rank-one coefficient bound";
    }
    return {};
}

inline std::string symmetric_difference_identity()
{
    CounterStream rng(16);
    for (int i = 0; i < 6; ++i) {
        auto sys = i % 2 == 0 ? SystemSpec::orientation(0.7) : SystemSpec::gaussian();
        auto g = random_word_of_length(rng, 2, 1 + uniform_below(rng, 6));
        auto a = ProfileVector::window(1 + uniform_below(rng, 5));
        double exact = symmetric_difference(sys, g, a);
        auto mc = symmetric_difference_monte_carlo(sys, g, a, {20000, rng.next_u64(), 1});
        if (std::abs(exact - mc.value) > 4.0 * mc.stderr_ + 1e-12)
            return "symmetric difference identity mu(gA delta A) = 2(mu(A) - overlap)";
    }
    return {};
}

}  // namespace selftest_detail

inline std::vector<SelfTestSuite> selftest_suites()
{
    using namespace selftest_detail;
    return {
        {"group-axioms", group_axioms},
        {"edge-action", edge_action},
        {"cocycle-identities", cocycle_identities},
        {"skew-action-law", skew_action_law},
        {"window-exact-vs-mc", window_exact_vs_mc},
        {"gaussian-profile-decay", gaussian_decay},
        {"gaussian-closed-forms", gaussian_closed_forms},
        {"gram-cholesky", gram_cholesky},
        {"projection-defect-identity", projection_defect_identity},
        {"hs-coefficient-bound", hs_coefficient_bound},
        {"symmetric-difference", symmetric_difference_identity},
    };
}

// Runs every suite; returns 0 when all pass and 1 otherwise.
inline int run_selftest(std::ostream& os, int verbosity = 1)
{
    bool all = true;
    for (auto const& suite : selftest_suites()) {
        auto start = std::chrono::steady_clock::now();
        std::string failure;
        try {
            failure = suite.run();
        } catch (std::exception const& e) {
            failure = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool ok = failure.empty();
        all = all && ok;
        if (verbosity > 0 || !ok) {
            os << (ok ? "PASS " : "FAIL ") << suite.name;
            if (verbosity > 0) {
                char buf[32];
                std::snprintf(buf, sizeof buf, " (%.3fs)", secs);
                os << buf;
            }
            if (!ok)
                os << ": " << failure;
            os << '\n';
        }
    }
    os << (all ? "selftest: all suites passed\n" : "selftest: FAILED\n");
    return all ? 0 : 1;
}

}  // namespace treelab
