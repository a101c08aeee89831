#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>

#include "oracles.hpp"
#include "treelab/generators.hpp"
#include "treelab/koopman.hpp"
#include "treelab/orientation.hpp"

using namespace treelab;

namespace {

GroupWord w(std::string const& s) { return parse_word(s, 2); }

std::vector<CanonicalEdge> edges_of_ball(std::size_t radius)
{
    std::vector<CanonicalEdge> out;
    for (auto const& v : ball(radius, 2))
        if (!v.is_identity())
            out.emplace_back(v.prefix(v.length() - 1), v.back());
    return out;
}

}  // namespace

TEST(OrientationMeasure, Validation)
{
    EXPECT_THROW(OrientationMeasure(0.0, 2), std::invalid_argument);
    EXPECT_THROW(OrientationMeasure(1.0, 2), std::invalid_argument);
    EXPECT_THROW(OrientationMeasure(0.5, 0), std::invalid_argument);
    EXPECT_FALSE(OrientationMeasure(0.5, 2).is_transient());
    EXPECT_TRUE(OrientationMeasure(0.7, 2).is_transient());
}

TEST(OrientationValue, Deterministic)
{
    Orientation a(42, OrientationMeasure(0.7, 2));
    Orientation b(42, OrientationMeasure(0.7, 2));
    for (auto const& e : edges_of_ball(4)) {
        int v = orientation_value(a, e);
        EXPECT_TRUE(v == 1 || v == -1);
        EXPECT_EQ(v, orientation_value(a, e));
        EXPECT_EQ(v, orientation_value(b, e));
    }
}

TEST(OrientationValue, BernoulliFrequency)
{
    // 10^5 distinct edges spread over the radius-9 ball.
    Orientation omega(2024, OrientationMeasure(0.7, 2));
    auto verts = ball(10, 2);
    std::size_t count = 0, negative = 0;
    for (auto const& v : verts) {
        if (v.is_identity())
            continue;
        if (count == 100000)
            break;
        ++count;
        if (omega.value(CanonicalEdge(v.prefix(v.length() - 1), v.back())) == -1)
            ++negative;
    }
    ASSERT_EQ(count, 100000u);
    EXPECT_NEAR(static_cast<double>(negative) / static_cast<double>(count), 0.7, 0.005);
}

TEST(OrientationValue, Override)
{
    CanonicalEdge e(w("ab"), 1);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Orientation omega = Orientation(seed, OrientationMeasure(0.9, 2)).with_override(e, +1);
        EXPECT_EQ(omega.value(e), +1);
    }
    Orientation omega(1, OrientationMeasure(0.5, 2));
    EXPECT_THROW(omega.with_override(e, 0), std::invalid_argument);
}

TEST(PathCocycle, BasicProperties)
{
    CounterStream rng(20);
    for (int i = 0; i < 1000; ++i) {
        Orientation omega(rng.next_u64(), OrientationMeasure(0.3 + 0.4 * rng.uniform(), 2));
        auto x = random_word(rng, 2, 8);
        auto y = random_word(rng, 2, 8);
        auto z = random_word(rng, 2, 8);
        EXPECT_EQ(path_cocycle(omega, x, x), 0);
        EXPECT_EQ(path_cocycle(omega, x, y), -path_cocycle(omega, y, x));
        EXPECT_EQ(path_cocycle(omega, x, z), path_cocycle(omega, x, y) + path_cocycle(omega, y, z));
        long c = path_cocycle(omega, x, y);
        auto d = static_cast<long>(distance(x, y));
        EXPECT_LE(std::abs(c), d);
        EXPECT_EQ(((c - d) % 2 + 2) % 2, 0);
    }
}

TEST(PathCocycle, BruteForceOverEdgeSigns)
{
    // Sum the orientation values along the oracle path directly.
    oracle::BallGraph graph(2, 3);
    Orientation omega(77, OrientationMeasure(0.6, 2));
    auto const& verts = graph.vertices();
    for (std::size_t i = 0; i < verts.size(); i += 3)
        for (std::size_t j = 0; j < verts.size(); j += 4) {
            auto path = graph.path(verts[i], verts[j]);
            long expected = 0;
            for (std::size_t k = 0; k + 1 < path.size(); ++k) {
                auto const& u = path[k];
                auto const& v = path[k + 1];
                bool outward = v.size() > u.size();
                auto const& far = outward ? v : u;
                CanonicalEdge e(parse_word(far.substr(0, far.size() - 1), 2),
                                parse_word(std::string(1, far.back()), 2).back());
                expected += (outward ? 1 : -1) * omega.value(e);
            }
            ASSERT_EQ(path_cocycle(omega, parse_word(verts[i], 2), parse_word(verts[j], 2)), expected);
        }
}

TEST(GroupCocycle, Properties)
{
    CounterStream rng(21);
    for (int i = 0; i < 1000; ++i) {
        Orientation omega(rng.next_u64(), OrientationMeasure(0.7, 2));
        auto g = random_word(rng, 2, 10);
        EXPECT_EQ(group_cocycle(omega, g), path_cocycle(omega, GroupWord(2), g));
        EXPECT_LE(std::abs(group_cocycle(omega, g)), static_cast<long>(g.length()));
    }
    Orientation omega(1, OrientationMeasure(0.7, 2));
    EXPECT_EQ(group_cocycle(omega, GroupWord(2)), 0);
}

TEST(GroupCocycle, ChainRule)
{
    CounterStream rng(22);
    for (int i = 0; i < 1000; ++i) {
        double p = std::array{0.3, 0.5, 0.7}[static_cast<std::size_t>(i % 3)];
        Orientation omega(rng.next_u64(), OrientationMeasure(p, 2));
        auto g = random_word(rng, 2, 8);
        auto h = random_word(rng, 2, 8);
        ASSERT_EQ(group_cocycle(omega, g * h),
                  group_cocycle(omega, g) + group_cocycle(pushforward(inverse(g), omega), h));
    }
}

TEST(Pushforward, IdentityAndComposition)
{
    auto edges = edges_of_ball(6);
    CounterStream rng(23);
    Orientation base(99, OrientationMeasure(0.7, 2));
    auto same = pushforward(GroupWord(2), base);
    for (auto const& e : edges)
        ASSERT_EQ(same.value(e), base.value(e));

    for (int i = 0; i < 200; ++i) {
        auto g = random_word(rng, 2, 6);
        auto h = random_word(rng, 2, 6);
        Orientation omega(rng.next_u64(), OrientationMeasure(0.7, 2));
        if (i % 2 == 1)
            omega = omega.with_override(random_edge(rng, 2, 4), -1);
        auto nested = pushforward(g, pushforward(h, omega));
        auto direct = pushforward(g * h, omega);
        for (auto const& e : edges)
            ASSERT_EQ(nested.value(e), direct.value(e));
    }
}

TEST(Pushforward, DefiningFormula)
{
    CounterStream rng(24);
    auto edges = edges_of_ball(4);
    for (int i = 0; i < 100; ++i) {
        auto g = random_word(rng, 2, 6);
        Orientation omega(rng.next_u64(), OrientationMeasure(0.4, 2));
        auto moved = pushforward(g, omega);
        for (auto const& e : edges) {
            auto img = act_on_edge(inverse(g), e);
            ASSERT_EQ(moved.value(e), img.flip * omega.value(img.edge));
        }
    }
}

TEST(Pushforward, Equivariance)
{
    CounterStream rng(25);
    for (int i = 0; i < 1000; ++i) {
        auto g = random_word(rng, 2, 6);
        auto x = random_word(rng, 2, 6);
        auto y = random_word(rng, 2, 6);
        Orientation omega(rng.next_u64(), OrientationMeasure(0.7, 2));
        ASSERT_EQ(path_cocycle(pushforward(g, omega), g * x, g * y), path_cocycle(omega, x, y));
    }
}

TEST(SkewStep, IdentityAndActionLaw)
{
    CounterStream rng(26);
    auto edges = edges_of_ball(5);
    Orientation omega0(5, OrientationMeasure(0.7, 2));
    auto fixed = skew_step(GroupWord(2), SkewPoint{omega0, 3.0});
    EXPECT_EQ(fixed.t, 3.0);
    for (auto const& e : edges)
        ASSERT_EQ(fixed.orientation.value(e), omega0.value(e));

    for (int i = 0; i < 500; ++i) {
        auto g = random_word(rng, 2, 6);
        auto h = random_word(rng, 2, 6);
        Orientation omega(rng.next_u64(), OrientationMeasure(0.7, 2));
        SkewPoint pt{omega, static_cast<double>(static_cast<long>(uniform_below(rng, 201)) - 100)};
        auto lhs = skew_step(g * h, pt);
        auto rhs = skew_step(g, skew_step(h, pt));
        ASSERT_EQ(lhs.t, rhs.t);
        if (i % 10 == 0) {
            for (auto const& e : edges)
                ASSERT_EQ(lhs.orientation.value(e), rhs.orientation.value(e));
        }
    }
}

TEST(SkewStep, ShiftLawMatchesPathSum)
{
    auto g = w("abAbb");
    double p = 0.7;
    auto law = path_sum_law(g.length(), p);
    std::map<long, std::size_t> hist;
    std::size_t n = 100000;
    for (std::size_t i = 0; i < n; ++i) {
        Orientation omega(combine(314, i), OrientationMeasure(p, 2));
        auto t = skew_step(g, SkewPoint{omega, 0.0}).t;
        EXPECT_EQ(t, skew_shift(g, omega));
        hist[static_cast<long>(t)]++;
    }
    for (std::size_t j = 0; j <= g.length(); ++j) {
        long s = law.value_at(j);
        double prob = law.probability(s);
        double expected = prob * static_cast<double>(n);
        double sd = std::sqrt(static_cast<double>(n) * prob * (1.0 - prob));
        EXPECT_LE(std::abs(static_cast<double>(hist[s]) - expected), 3.0 * sd) << "s=" << s;
    }
}

TEST(PathSumLaw, Examples)
{
    auto zero = path_sum_law(0, 0.3);
    EXPECT_EQ(zero.probability(0), 1.0);
    auto three = path_sum_law(3, 0.5);
    EXPECT_DOUBLE_EQ(three.probability(3), 1.0 / 8.0);
    EXPECT_DOUBLE_EQ(three.probability(1), 3.0 / 8.0);
    EXPECT_EQ(three.probability(2), 0.0);
    EXPECT_EQ(three.probability(5), 0.0);
}

TEST(PathSumLaw, MatchesEnumeration)
{
    for (std::size_t len = 0; len <= 12; ++len)
        for (double q : {0.1, 0.3, 0.5, 0.7, 0.95}) {
            auto law = path_sum_law(len, q);
            auto ref = oracle::enumerate_sign_sums(len, q);
            EXPECT_NEAR(law.total_mass(), 1.0, 1e-12);
            for (long s = -static_cast<long>(len); s <= static_cast<long>(len); ++s) {
                double expected = ref.count(s) ? ref[s] : 0.0;
                ASSERT_NEAR(law.probability(s), expected, 1e-13) << len << ' ' << q << ' ' << s;
            }
            EXPECT_NEAR(law.mean(), static_cast<double>(len) * (1.0 - 2.0 * q), 1e-12);
        }
}

TEST(PathSumLaw, MeanMatchesSampling)
{
    std::size_t len = 15;
    double p = 0.7;
    CounterStream rng(27);
    auto g = random_word_of_length(rng, 2, len);
    RunningMoments m;
    for (std::size_t i = 0; i < 100000; ++i) {
        Orientation omega(combine(27, i), OrientationMeasure(p, 2));
        m.add(static_cast<double>(group_cocycle(omega, g)));
    }
    double expected = path_sum_law(len, p).mean();
    EXPECT_LE(std::abs(m.mean() - expected), 3.0 * m.stderr_of_mean());
}

TEST(ExactWindowCoefficient, Examples)
{
    EXPECT_EQ(exact_window_coefficient(GroupWord(2), 5, 0.7), 1.0);
    for (double p : {0.2, 0.5, 0.8})
        EXPECT_DOUBLE_EQ(exact_window_coefficient(w("b"), 1, p), 0.5);
}

TEST(ExactWindowCoefficient, BoundsAndCertifiedRate)
{
    for (std::size_t len = 0; len <= 20; ++len)
        for (std::size_t n : {1u, 3u, 10u, 50u})
            for (double p : {0.1, 0.5, 0.7}) {
                double v = exact_window_coefficient(len, n, p);
                EXPECT_GE(v, 0.0);
                EXPECT_LE(v, 1.0 + 1e-15);
                EXPECT_GE(v, 1.0 - static_cast<double>(len) / (2.0 * static_cast<double>(n)) - 1e-15);
            }
}

TEST(ExactWindowDefect, MatchesCoefficientAndBound)
{
    EXPECT_EQ(exact_window_defect(0, 5, 0.3), 0.0);
    EXPECT_THROW(exact_window_defect(2, 0, 0.3), std::invalid_argument);
    for (std::size_t len = 0; len <= 12; ++len)
        for (std::size_t n : {1u, 2u, 5u, 50u})
            for (double p : {0.1, 0.5, 0.7}) {
                double d = exact_window_defect(len, n, p);
                EXPECT_NEAR(d, 1.0 - exact_window_coefficient(len, n, p), 1e-14);
                EXPECT_LE(d, static_cast<double>(len) / (2.0 * static_cast<double>(n)) * (1.0 + 1e-15));
                EXPECT_GE(d, 0.0);
            }
}

TEST(ExactWindowCoefficient, MatchesMonteCarlo)
{
    auto g = w("abABa");
    for (std::size_t n : {1u, 3u, 8u}) {
        auto xi = ProfileVector::window(n);
        auto sys = SystemSpec::orientation(0.7);
        double exact = exact_window_coefficient(g, n, 0.7);
        auto mc = coefficient(sys, g, xi, xi, {100000, 5, 2, MethodPreference::monte_carlo});
        EXPECT_LE(std::abs(exact - mc.value), 4.0 * mc.stderr_) << n;
    }
}

TEST(ExactGaussianBound, Decay)
{
    EXPECT_EQ(exact_gaussian_bound(GroupWord(2), 0.7), 1.0);
    double prev = 1.0;
    for (std::size_t len = 1; len <= 20; ++len) {
        double v = exact_gaussian_bound(len, 0.7);
        EXPECT_LT(v, prev);
        EXPECT_GT(v, 0.0);
        prev = v;
    }
    EXPECT_GT(exact_gaussian_bound(20, 0.5), exact_gaussian_bound(20, 0.7));
}

TEST(ExactGaussianBound, RecurrentCaseInverseSquareRoot)
{
    double fit = 0.0;
    int count = 0;
    for (std::size_t len = 1; len <= 20; ++len) {
        fit += exact_gaussian_bound(len, 0.5) * std::sqrt(static_cast<double>(len));
        ++count;
    }
    fit /= count;
    for (std::size_t len = 1; len <= 20; ++len) {
        double ratio = exact_gaussian_bound(len, 0.5) * std::sqrt(static_cast<double>(len)) / fit;
        EXPECT_GT(ratio, 0.5) << len;
        EXPECT_LT(ratio, 2.0) << len;
    }
}

TEST(SkewProduct, OverlapSymmetricUnderInverse)
{
    // (mu x lambda)(beta_g A cap B) for A = Omega x I, B = Omega x J.
    Interval i(-1.5, 2.0), j(0.0, 3.0);
    auto xi = ProfileVector::indicator(i);
    auto eta = ProfileVector::indicator(j);
    auto sys = SystemSpec::orientation(0.7);
    CounterStream rng(28);
    for (int k = 0; k < 5; ++k) {
        auto g = random_word_of_length(rng, 2, 1 + uniform_below(rng, 6));
        auto a = coefficient(sys, g, xi, eta, {100000, 11, 1, MethodPreference::monte_carlo});
        auto b = coefficient(sys, inverse(g), xi, eta, {100000, 12, 1, MethodPreference::monte_carlo});
        EXPECT_LE(std::abs(a.value - b.value), 4.0 * std::hypot(a.stderr_, b.stderr_));
    }
}
