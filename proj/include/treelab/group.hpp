#pragma once

// Free groups F_k and the geometry of their Cayley trees T_{2k}.
//
// A generator letter is a signed index: +i is the i-th generator, -i its
// inverse (1 <= i <= k). Words are always kept freely reduced. The root of
// the tree is the identity word; every edge is stored in canonical form as
// (parent, step) with the far endpoint parent*step one step farther from the
// root, and the reference direction of an edge points away from the root.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace treelab {

using Letter = std::int8_t;

class GroupError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

class GroupWord
{
  public:
    GroupWord() = default;

    explicit GroupWord(int rank) : rank_(rank) { check_rank(rank); }

    // Reduces the given letters; every letter must satisfy 1 <= |l| <= rank.
    GroupWord(int rank, std::vector<Letter> const& letters) : rank_(rank)
    {
        check_rank(rank);
        letters_.reserve(letters.size());
        for (Letter l : letters)
            push_back(l);
    }

    static GroupWord identity(int rank) { return GroupWord(rank); }

    static GroupWord generator(int rank, Letter l) { return GroupWord(rank, {l}); }

    int rank() const noexcept { return rank_; }
    std::size_t length() const noexcept { return letters_.size(); }
    bool is_identity() const noexcept { return letters_.empty(); }
    std::vector<Letter> const& letters() const noexcept { return letters_; }
    Letter operator[](std::size_t i) const { return letters_[i]; }
    Letter back() const { return letters_.back(); }

    // Right multiplication by one letter, with free cancellation.
    void push_back(Letter l)
    {
        if (l == 0 || l > rank_ || -l > rank_)
            throw GroupError("generator index out of range for rank " + std::to_string(rank_));
        if (!letters_.empty() && letters_.back() == -l)
            letters_.pop_back();
        else
            letters_.push_back(l);
    }

    GroupWord prefix(std::size_t n) const
    {
        GroupWord w(rank_);
        w.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(n));
        return w;
    }

    std::string to_string() const
    {
        if (letters_.empty())
            return "e";
        std::string s;
        for (Letter l : letters_)
            s.push_back(letter_char(l));
        return s;
    }

    friend bool operator==(GroupWord const&, GroupWord const&) = default;
    friend auto operator<=>(GroupWord const& a, GroupWord const& b)
    {
        if (auto c = a.rank_ <=> b.rank_; c != 0)
            return c;
        if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0)
            return c;
        return a.letters_ <=> b.letters_;
    }

    static char letter_char(Letter l)
    {
        return l > 0 ? static_cast<char>('a' + l - 1) : static_cast<char>('A' - l - 1);
    }

  private:
    static void check_rank(int rank)
    {
        if (rank < 1 || rank > 26)
            throw GroupError("rank must be in 1..26, got " + std::to_string(rank));
    }

    int rank_ = 2;
    std::vector<Letter> letters_;
};

inline void require_same_rank(GroupWord const& a, GroupWord const& b)
{
    if (a.rank() != b.rank())
        throw GroupError("rank mismatch: " + std::to_string(a.rank()) + " vs " +
                         std::to_string(b.rank()));
}

inline GroupWord multiply(GroupWord const& g, GroupWord const& h)
{
    require_same_rank(g, h);
    GroupWord out = g;
    for (Letter l : h.letters())
        out.push_back(l);
    return out;
}

inline GroupWord operator*(GroupWord const& g, GroupWord const& h) { return multiply(g, h); }

inline GroupWord inverse(GroupWord const& g)
{
    std::vector<Letter> rev(g.letters().rbegin(), g.letters().rend());
    for (Letter& l : rev)
        l = static_cast<Letter>(-l);
    return GroupWord(g.rank(), rev);
}

// Accepts either compact form ("abAB": lower case generators, upper case
// inverses) or explicit tokens ("a1 a2^-1 a1^3"). Whitespace is ignored. The
// empty string and "1" denote the identity, as does "e" when rank < 5.
inline GroupWord parse_word(std::string_view text, int rank)
{
    GroupWord w(rank);
    std::string compact;
    for (char c : text)
        if (c != ' ' && c != '\t' && c != '\n' && c != '\r')
            compact.push_back(c);
    if (compact.empty() || compact == "1" || (compact == "e" && rank < 5))
        return w;

    auto letter_for = [&](int index, char ch) -> int {
        if (index < 1 || index > rank)
            throw GroupError(std::string("letter '") + ch + "' beyond rank " +
                             std::to_string(rank));
        return index;
    };

    std::size_t i = 0;
    while (i < compact.size()) {
        char c = compact[i];
        int index = 0;
        bool digit_follows =
            i + 1 < compact.size() && compact[i + 1] >= '0' && compact[i + 1] <= '9';
        if (digit_follows && c != 'a')
            throw GroupError("malformed token in '" + std::string(text) + "'");
        if (c == 'a' && digit_follows) {
            // Explicit token: a<index>[^<exponent>]
            ++i;
            while (i < compact.size() && compact[i] >= '0' && compact[i] <= '9') {
                index = index * 10 + (compact[i] - '0');
                if (index > 26)
                    throw GroupError("generator index too large in '" + std::string(text) + "'");
                ++i;
            }
            index = letter_for(index, c);
        } else if (c >= 'a' && c <= 'z') {
            index = letter_for(c - 'a' + 1, c);
            ++i;
        } else if (c >= 'A' && c <= 'Z') {
            index = -letter_for(c - 'A' + 1, c);
            ++i;
        } else {
            throw GroupError(std::string("unknown letter '") + c + "'");
        }

        long exponent = 1;
        if (i < compact.size() && compact[i] == '^') {
            ++i;
            bool negative = false;
            if (i < compact.size() && (compact[i] == '-' || compact[i] == '+')) {
                negative = compact[i] == '-';
                ++i;
            }
            std::size_t start = i;
            exponent = 0;
            while (i < compact.size() && compact[i] >= '0' && compact[i] <= '9') {
                exponent = exponent * 10 + (compact[i] - '0');
                if (exponent > 1'000'000)
                    throw GroupError("exponent too large");
                ++i;
            }
            if (i == start)
                throw GroupError("malformed exponent in '" + std::string(text) + "'");
            if (negative)
                exponent = -exponent;
        }

        Letter l = static_cast<Letter>(exponent < 0 ? -index : index);
        for (long r = 0; r < (exponent < 0 ? -exponent : exponent); ++r)
            w.push_back(l);
    }
    return w;
}

inline std::size_t distance(GroupWord const& x, GroupWord const& y)
{
    require_same_rank(x, y);
    auto const& a = x.letters();
    auto const& b = y.letters();
    std::size_t common = 0;
    while (common < a.size() && common < b.size() && a[common] == b[common])
        ++common;
    return (a.size() - common) + (b.size() - common);
}

//---------------------------------------------------------------------------//
// Edges

struct CanonicalEdge
{
    GroupWord parent;
    Letter step = 1;

    CanonicalEdge() = default;
    CanonicalEdge(GroupWord p, Letter s) : parent(std::move(p)), step(s)
    {
        if (!parent.is_identity() && parent.back() == -step)
            throw GroupError("edge step must move away from the root");
        if (s == 0 || s > parent.rank() || -s > parent.rank())
            throw GroupError("edge step out of range");
    }

    // The far endpoint; in a rooted tree it identifies the edge uniquely.
    GroupWord child() const
    {
        GroupWord c = parent;
        c.push_back(step);
        return c;
    }

    friend bool operator==(CanonicalEdge const&, CanonicalEdge const&) = default;
    friend auto operator<=>(CanonicalEdge const& a, CanonicalEdge const& b)
    {
        if (auto c = a.parent <=> b.parent; c != 0)
            return c;
        return a.step <=> b.step;
    }
};

// Canonical edge between two adjacent vertices, plus +1 if the traversal
// u -> w agrees with the away-from-root reference, -1 otherwise.
inline std::pair<CanonicalEdge, int> edge_between(GroupWord const& u, GroupWord const& w)
{
    if (distance(u, w) != 1)
        throw GroupError("vertices are not adjacent");
    if (w.length() > u.length())
        return {CanonicalEdge(u, w.back()), +1};
    return {CanonicalEdge(w, u.back()), -1};
}

struct PathStep
{
    CanonicalEdge edge;
    int travel = +1;

    friend bool operator==(PathStep const&, PathStep const&) = default;
};

struct GeodesicPath
{
    GroupWord from;
    GroupWord to;
    std::vector<PathStep> steps;

    std::size_t length() const noexcept { return steps.size(); }
};

// The path climbs from x to the longest common prefix of x and y (against the
// reference direction), then descends to y (with it).
inline GeodesicPath geodesic(GroupWord const& x, GroupWord const& y)
{
    require_same_rank(x, y);
    GeodesicPath path{x, y, {}};
    auto const& a = x.letters();
    auto const& b = y.letters();
    std::size_t common = 0;
    while (common < a.size() && common < b.size() && a[common] == b[common])
        ++common;
    path.steps.reserve(a.size() + b.size() - 2 * common);
    for (std::size_t i = a.size(); i > common; --i)
        path.steps.push_back({CanonicalEdge(x.prefix(i - 1), a[i - 1]), -1});
    for (std::size_t i = common; i < b.size(); ++i)
        path.steps.push_back({CanonicalEdge(y.prefix(i), b[i]), +1});
    return path;
}

inline GeodesicPath reversed(GeodesicPath const& path)
{
    GeodesicPath out{path.to, path.from, {}};
    out.steps.reserve(path.steps.size());
    for (auto it = path.steps.rbegin(); it != path.steps.rend(); ++it)
        out.steps.push_back({it->edge, -it->travel});
    return out;
}

namespace detail {
inline GroupWord longest_common_prefix(GroupWord const& x, GroupWord const& y)
{
    std::size_t common = 0;
    while (common < x.length() && common < y.length() && x[common] == y[common])
        ++common;
    return x.prefix(common);
}
}  // namespace detail

// In a rooted tree the median is the deepest of the three pairwise meets.
inline GroupWord median(GroupWord const& x, GroupWord const& y, GroupWord const& z)
{
    require_same_rank(x, y);
    require_same_rank(y, z);
    GroupWord m = detail::longest_common_prefix(x, y);
    for (GroupWord candidate :
         {detail::longest_common_prefix(y, z), detail::longest_common_prefix(x, z)}) {
        if (candidate.length() > m.length())
            m = std::move(candidate);
    }
    return m;
}

struct EdgeImage
{
    CanonicalEdge edge;
    int flip = +1;
};

inline EdgeImage act_on_edge(GroupWord const& g, CanonicalEdge const& e)
{
    require_same_rank(g, e.parent);
    GroupWord u = g * e.parent;
    GroupWord w = u;
    w.push_back(e.step);
    auto [edge, flip] = edge_between(u, w);
    return {std::move(edge), flip};
}

// All reduced words of length exactly `radius`, in lexicographic order of
// the letter sequence a < b < ... < A < B < ... .
inline std::vector<GroupWord> sphere(std::size_t radius, int rank)
{
    std::vector<Letter> alphabet;
    for (int i = 1; i <= rank; ++i)
        alphabet.push_back(static_cast<Letter>(i));
    for (int i = 1; i <= rank; ++i)
        alphabet.push_back(static_cast<Letter>(-i));

    std::vector<GroupWord> shell{GroupWord(rank)};
    for (std::size_t r = 0; r < radius; ++r) {
        std::vector<GroupWord> next;
        next.reserve(shell.size() * alphabet.size());
        for (auto const& w : shell) {
            for (Letter l : alphabet) {
                if (!w.is_identity() && w.back() == -l)
                    continue;
                GroupWord v = w;
                v.push_back(l);
                next.push_back(std::move(v));
            }
        }
        shell = std::move(next);
    }
    return shell;
}

inline std::vector<GroupWord> ball(std::size_t radius, int rank)
{
    std::vector<GroupWord> out;
    for (std::size_t r = 0; r <= radius; ++r) {
        auto shell = sphere(r, rank);
        out.insert(out.end(), std::make_move_iterator(shell.begin()),
                   std::make_move_iterator(shell.end()));
    }
    return out;
}

inline std::size_t sphere_size(std::size_t radius, int rank)
{
    if (radius == 0)
        return 1;
    std::size_t n = 2 * static_cast<std::size_t>(rank);
    for (std::size_t r = 1; r < radius; ++r)
        n *= 2 * static_cast<std::size_t>(rank) - 1;
    return n;
}

inline std::size_t ball_size(std::size_t radius, int rank)
{
    std::size_t n = 0;
    for (std::size_t r = 0; r <= radius; ++r)
        n += sphere_size(r, rank);
    return n;
}

struct WordHash
{
    std::size_t operator()(GroupWord const& w) const noexcept
    {
        std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(w.rank());
        for (Letter l : w.letters()) {
            h ^= static_cast<std::uint8_t>(l);
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

struct EdgeHash
{
    std::size_t operator()(CanonicalEdge const& e) const noexcept
    {
        return WordHash{}(e.parent) * 31 + static_cast<std::uint8_t>(e.step);
    }
};

}  // namespace treelab
