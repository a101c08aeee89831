#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "treelab/generators.hpp"
#include "treelab/group.hpp"

using namespace treelab;

namespace {

GroupWord w(std::string const& s, int rank = 2) { return parse_word(s, rank); }

std::string str(GroupWord const& g) { return g.is_identity() ? std::string() : g.to_string(); }

}  // namespace

TEST(ParseWord, CompactForm)
{
    EXPECT_EQ(w("abAB").length(), 4u);
    EXPECT_TRUE(w("aA").is_identity());
    EXPECT_TRUE(w("abBA").is_identity());
    EXPECT_EQ(w(" a b  A ").to_string(), "abA");
}

TEST(ParseWord, ExplicitForm)
{
    EXPECT_EQ(w("a1 a2^-1"), w("aB"));
    EXPECT_EQ(w("a2^3 a1^-2"), w("bbbAA"));
    EXPECT_EQ(parse_word("a3 a10^-1", 10), GroupWord(10, {3, -10}));
}

TEST(ParseWord, Identity)
{
    EXPECT_TRUE(w("").is_identity());
    EXPECT_TRUE(w("1").is_identity());
    EXPECT_TRUE(w("e").is_identity());
    // With five or more generators 'e' is a letter.
    EXPECT_EQ(parse_word("e", 5).length(), 1u);
}

TEST(ParseWord, Errors)
{
    EXPECT_THROW(w("abc"), GroupError);
    EXPECT_THROW(w("a?"), GroupError);
    EXPECT_THROW(w("a3"), GroupError);
    EXPECT_THROW(w("a1^"), GroupError);
    EXPECT_THROW(w("a1^x"), GroupError);
    EXPECT_THROW(w("b2"), GroupError);
    EXPECT_THROW(parse_word("ab", 27), GroupError);
}

TEST(GroupWord, ToStringRoundTrip)
{
    CounterStream rng(3);
    for (int i = 0; i < 200; ++i) {
        auto g = random_word(rng, 3, 10);
        EXPECT_EQ(parse_word(g.to_string(), 3), g);
    }
}

TEST(Multiply, Examples)
{
    EXPECT_TRUE((w("ab") * w("BA")).is_identity());
    EXPECT_EQ(w("ab") * w("b"), w("abb"));
    EXPECT_EQ(GroupWord(2) * w("aBBa"), w("aBBa"));
    EXPECT_THROW(w("a") * parse_word("a", 3), GroupError);
}

TEST(Multiply, LengthParity)
{
    CounterStream rng(4);
    for (int i = 0; i < 500; ++i) {
        auto g = random_word(rng, 2, 10);
        auto h = random_word(rng, 2, 10);
        auto gh = g * h;
        EXPECT_LE(gh.length(), g.length() + h.length());
        EXPECT_EQ(gh.length() % 2, (g.length() + h.length()) % 2);
        EXPECT_EQ(str(gh), oracle::times(str(g), str(h)));
    }
}

TEST(Inverse, Examples)
{
    EXPECT_EQ(inverse(w("ab")), w("BA"));
    EXPECT_TRUE(inverse(GroupWord(2)).is_identity());
    CounterStream rng(5);
    for (int i = 0; i < 200; ++i) {
        auto g = random_word(rng, 2, 12);
        EXPECT_EQ(inverse(inverse(g)), g);
        EXPECT_EQ(inverse(g).length(), g.length());
        EXPECT_TRUE((g * inverse(g)).is_identity());
    }
}

TEST(GroupAxioms, RandomTriples)
{
    CounterStream rng(6);
    for (int i = 0; i < 1000; ++i) {
        auto a = random_word(rng, 2, 12);
        auto b = random_word(rng, 2, 12);
        auto c = random_word(rng, 2, 12);
        ASSERT_EQ((a * b) * c, a * (b * c));
        ASSERT_EQ(a * GroupWord(2), a);
        ASSERT_TRUE((inverse(a) * a).is_identity());
    }
}

TEST(Distance, Examples)
{
    EXPECT_EQ(distance(GroupWord(2), w("abA")), 3u);
    EXPECT_EQ(distance(w("a"), w("a")), 0u);
    EXPECT_EQ(distance(w("ab"), w("aB")), 2u);
    EXPECT_THROW(distance(w("a"), parse_word("a", 3)), GroupError);
}

TEST(Distance, MetricAndIsometry)
{
    CounterStream rng(7);
    for (int i = 0; i < 1000; ++i) {
        auto x = random_word(rng, 2, 8);
        auto y = random_word(rng, 2, 8);
        auto z = random_word(rng, 2, 8);
        auto g = random_word(rng, 2, 8);
        EXPECT_EQ(distance(x, y), distance(y, x));
        EXPECT_EQ(distance(x, y) == 0, x == y);
        EXPECT_LE(distance(x, z), distance(x, y) + distance(y, z));
        EXPECT_EQ(distance(g * x, g * y), distance(x, y));
        EXPECT_EQ(distance(x, y), (inverse(x) * y).length());
    }
}

namespace {

// Vertex sequence visited by a library geodesic.
std::vector<std::string> vertices_of(GeodesicPath const& path)
{
    std::vector<std::string> out{str(path.from)};
    for (auto const& s : path.steps)
        out.push_back(str(s.travel > 0 ? s.edge.child() : s.edge.parent));
    return out;
}

}  // namespace

TEST(Geodesic, Examples)
{
    auto p = geodesic(GroupWord(2), w("ab"));
    ASSERT_EQ(p.length(), 2u);
    EXPECT_EQ(p.steps[0], (PathStep{CanonicalEdge(GroupWord(2), 1), +1}));
    EXPECT_EQ(p.steps[1], (PathStep{CanonicalEdge(w("a"), 2), +1}));

    auto q = geodesic(w("a"), GroupWord(2));
    ASSERT_EQ(q.length(), 1u);
    EXPECT_EQ(q.steps[0], (PathStep{CanonicalEdge(GroupWord(2), 1), -1}));

    auto r = geodesic(w("ab"), w("aB"));
    ASSERT_EQ(r.length(), 2u);
    EXPECT_EQ(vertices_of(r), (std::vector<std::string>{"ab", "a", "aB"}));
}

TEST(Geodesic, MatchesBreadthFirstSearch)
{
    oracle::BallGraph graph(2, 3);
    auto const& verts = graph.vertices();
    ASSERT_EQ(verts.size(), 53u);
    for (std::size_t i = 0; i < verts.size(); i += 2)
        for (std::size_t j = 0; j < verts.size(); j += 3) {
            auto x = w(verts[i]);
            auto y = w(verts[j]);
            auto path = geodesic(x, y);
            auto expected = graph.path(verts[i], verts[j]);
            ASSERT_EQ(vertices_of(path), expected) << verts[i] << " -> " << verts[j];
            ASSERT_EQ(path.length(), distance(x, y));
            for (std::size_t k = 0; k < path.steps.size(); ++k) {
                bool outward = expected[k + 1].size() > expected[k].size();
                ASSERT_EQ(path.steps[k].travel, outward ? +1 : -1);
            }
        }
}

TEST(Geodesic, ReversalNegatesTravel)
{
    CounterStream rng(8);
    for (int i = 0; i < 500; ++i) {
        auto x = random_word(rng, 2, 8);
        auto y = random_word(rng, 2, 8);
        auto fwd = reversed(geodesic(x, y));
        auto back = geodesic(y, x);
        ASSERT_EQ(fwd.steps, back.steps);
        std::set<CanonicalEdge> edges;
        for (auto const& s : back.steps)
            edges.insert(s.edge);
        ASSERT_EQ(edges.size(), back.steps.size());
    }
}

TEST(Median, Examples)
{
    EXPECT_TRUE(median(GroupWord(2), w("a"), w("b")).is_identity());
    EXPECT_EQ(median(GroupWord(2), w("ab"), w("a")), w("a"));
    EXPECT_EQ(median(w("aa"), w("ab"), w("aB")), w("a"));
}

TEST(Median, MatchesBreadthFirstSearch)
{
    oracle::BallGraph graph(2, 3);
    CounterStream rng(9);
    auto const& verts = graph.vertices();
    for (int trial = 0; trial < 300; ++trial) {
        auto const& x = verts[uniform_below(rng, verts.size())];
        auto const& y = verts[uniform_below(rng, verts.size())];
        auto const& z = verts[uniform_below(rng, verts.size())];
        auto m = median(w(x), w(y), w(z));
        ASSERT_EQ(str(m), graph.median(x, y, z)) << x << ' ' << y << ' ' << z;
        ASSERT_EQ(distance(w(x), m) + distance(m, w(y)), distance(w(x), w(y)));
        ASSERT_EQ(distance(w(y), m) + distance(m, w(z)), distance(w(y), w(z)));
        ASSERT_EQ(distance(w(x), m) + distance(m, w(z)), distance(w(x), w(z)));
    }
}

TEST(ActOnEdge, Examples)
{
    CanonicalEdge e(GroupWord(2), 1);
    auto same = act_on_edge(GroupWord(2), e);
    EXPECT_EQ(same.edge, e);
    EXPECT_EQ(same.flip, +1);

    // Endpoints A.e = A and A.a = e: the image edge is (e, A), traversed inward.
    auto img = act_on_edge(w("A"), e);
    EXPECT_EQ(img.edge, CanonicalEdge(GroupWord(2), -1));
    EXPECT_EQ(img.flip, -1);
}

TEST(ActOnEdge, MatchesEndpointOracle)
{
    for (auto const& g : ball(2, 2))
        for (auto const& v : ball(3, 2)) {
            if (v.is_identity())
                continue;
            CanonicalEdge e(v.prefix(v.length() - 1), v.back());
            auto img = act_on_edge(g, e);
            std::string vs = str(v);
            auto ref = oracle::act(str(g), vs.substr(0, vs.size() - 1), vs.back());
            ASSERT_EQ(str(img.edge.parent), ref.parent);
            ASSERT_EQ(GroupWord::letter_char(img.edge.step), ref.step);
            ASSERT_EQ(img.flip, ref.flip);
        }
}

TEST(ActOnEdge, CompositionLaw)
{
    CounterStream rng(10);
    for (int i = 0; i < 1000; ++i) {
        auto g = random_word(rng, 2, 8);
        auto h = random_word(rng, 2, 8);
        auto e = random_edge(rng, 2, 8);
        auto inner = act_on_edge(h, e);
        auto outer = act_on_edge(g, inner.edge);
        auto direct = act_on_edge(g * h, e);
        ASSERT_EQ(direct.edge, outer.edge);
        ASSERT_EQ(direct.flip, inner.flip * outer.flip);
    }
}

TEST(CanonicalEdge, Validation)
{
    EXPECT_THROW(CanonicalEdge(w("a"), -1), GroupError);
    EXPECT_THROW(CanonicalEdge(w("a"), 3), GroupError);
    EXPECT_EQ(CanonicalEdge(w("a"), 2).child(), w("ab"));
    EXPECT_THROW(edge_between(w("a"), w("b")), GroupError);
}

TEST(Ball, SizesAndOrder)
{
    EXPECT_EQ(ball(0, 2).size(), 1u);
    EXPECT_EQ(ball(1, 2).size(), 5u);
    EXPECT_EQ(ball(3, 2).size(), 53u);
    for (int k = 2; k <= 4; ++k)
        for (std::size_t r = 0; r <= 5; ++r) {
            auto b = ball(r, k);
            std::size_t geometric = 1;
            std::size_t shell = 2 * static_cast<std::size_t>(k);
            for (std::size_t i = 1; i <= r; ++i, shell *= 2 * static_cast<std::size_t>(k) - 1)
                geometric += shell;
            EXPECT_EQ(b.size(), geometric);
            EXPECT_EQ(b.size(), ball_size(r, k));
            EXPECT_EQ(std::set<GroupWord>(b.begin(), b.end()).size(), b.size());
        }
    EXPECT_EQ(ball(4, 2), ball(4, 2));
    auto s = sphere(1, 2);
    ASSERT_EQ(s.size(), 4u);
    EXPECT_EQ(s[0].to_string(), "a");
    EXPECT_EQ(s[1].to_string(), "b");
    EXPECT_EQ(s[2].to_string(), "A");
    EXPECT_EQ(s[3].to_string(), "B");
}

TEST(Ball, MatchesEnumeration)
{
    oracle::BallGraph graph(2, 4);
    std::set<std::string> expected(graph.vertices().begin(), graph.vertices().end());
    std::set<std::string> got;
    for (auto const& g : ball(4, 2))
        got.insert(str(g));
    EXPECT_EQ(got, expected);
}
