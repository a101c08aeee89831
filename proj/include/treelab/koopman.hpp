#pragma once

// Matrix coefficients <pi(g) xi, eta> of the Koopman representation for the
// two skew-product systems, by exact evaluation or Monte Carlo, and the
// sweeps built on them.
//
// For xi = 1 (x) h1 and eta = 1 (x) h2,
//     <pi(g) xi, eta> = E[ K(s) ],   K(s) = integral h1(t + s) h2(t) dt,
// where s is the real-coordinate shift of beta_{g^-1}: s = c(g, omega) for
// orientations and s ~ Normal(0, |g|) in the Gaussian system.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "treelab/gaussian.hpp"
#include "treelab/group.hpp"
#include "treelab/orientation.hpp"
#include "treelab/profile.hpp"
#include "treelab/random.hpp"

namespace treelab {

class UnsupportedProfile : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class SystemKind { orientation, gaussian };

struct SystemSpec
{
    SystemKind kind = SystemKind::orientation;
    double p = 0.7;
    int rank = 2;

    static SystemSpec orientation(double p, int rank = 2)
    {
        OrientationMeasure check(p, rank);
        return {SystemKind::orientation, p, rank};
    }
    static SystemSpec gaussian(int rank = 2) { return {SystemKind::gaussian, 0.0, rank}; }

    OrientationMeasure measure() const { return OrientationMeasure(p, rank); }

    std::string label() const
    {
        if (kind == SystemKind::gaussian)
            return "gaussian";
        char buf[48];
        std::snprintf(buf, sizeof buf, "orientation(p=%.17g)", p);
        return buf;
    }
};

enum class Method { exact, quadrature, monte_carlo };

inline char const* to_string(Method m)
{
    switch (m) {
    case Method::exact:
        return "exact";
    case Method::quadrature:
        return "quadrature";
    case Method::monte_carlo:
        return "monte-carlo";
    }
    return "?";
}

enum class MethodPreference { automatic, monte_carlo };

struct Budget
{
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    MethodPreference preference = MethodPreference::automatic;
};

struct CoefficientEstimate
{
    double value = 0.0;
    double stderr_ = 0.0;
    Method method = Method::exact;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

namespace detail {

inline void check_pair(SystemSpec const& system, ProfileVector const& xi, ProfileVector const& eta)
{
    bool ok = (xi.is_interval_type() && eta.is_interval_type()) ||
              (xi.kind() == eta.kind() && !xi.is_interval_type());
    if (ok && system.kind == SystemKind::orientation && xi.kind() == ProfileKind::cauchy)
        ok = false;
    if (!ok)
        throw UnsupportedProfile("unsupported profile pair (" + xi.to_string() + ", " +
                                 eta.to_string() + ") for system " + system.label());
}

// K(s) for a supported pair, including the profile scales.
inline double pair_kernel(ProfileVector const& xi, ProfileVector const& eta, double s)
{
    double v;
    if (xi.is_interval_type())
        v = shifted_overlap(xi.interval(), eta.interval(), -s);
    else if (xi.kind() == ProfileKind::cauchy)
        v = cauchy_autocorrelation(s);
    else
        v = std::sqrt(0.5 * std::numbers::pi) * std::exp(-0.5 * s * s);
    return ProfileVector::scaled(xi, eta, v);
}

inline std::uint64_t sample_key(std::uint64_t seed, std::size_t i)
{
    return combine(seed, static_cast<std::uint64_t>(i));
}

// Draws the shift s for sample i.
inline double draw_shift(SystemSpec const& system, GroupWord const& g,
                         GaussianSystem const* gauss, std::uint64_t seed, std::size_t i)
{
    if (system.kind == SystemKind::orientation) {
        Orientation omega(sample_key(seed, i), system.measure());
        return skew_shift(inverse(g), omega);
    }
    return gauss->sample(sample_key(seed, i))[0];
}

inline double exact_pair_value(SystemSpec const& system, GroupWord const& g,
                               ProfileVector const& xi, ProfileVector const& eta, Method& method)
{
    if (system.kind == SystemKind::orientation) {
        method = Method::exact;
        return path_sum_law(g.length(), system.p).expectation([&](long s) {
            return pair_kernel(xi, eta, static_cast<double>(s));
        });
    }
    double sigma = CocycleLaw::of(g).sigma;
    if (xi.is_interval_type()) {
        method = Method::exact;
        // X is symmetric, so the sign of the shift does not matter.
        return ProfileVector::scaled(xi, eta,
                                     interval_overlap_measure(sigma, xi.interval(), eta.interval()));
    }
    if (xi.kind() == ProfileKind::cauchy) {
        method = Method::quadrature;
        return ProfileVector::scaled(xi, eta, cauchy_coefficient(sigma));
    }
    method = Method::exact;
    return ProfileVector::scaled(xi, eta, gaussian_profile_coefficient(sigma));
}

}  // namespace detail

// Monte Carlo estimate of <pi(g) xi, eta>. Interval-type profiles sample both
// coordinates (t uniform on the support of eta); smooth profiles integrate t
// in closed form and sample only the shift.
inline CoefficientEstimate coefficient_monte_carlo(SystemSpec const& system, GroupWord const& g,
                                                   ProfileVector const& xi,
                                                   ProfileVector const& eta, Budget const& budget)
{
    detail::check_pair(system, xi, eta);
    if (budget.samples < 2)
        throw std::invalid_argument("Monte Carlo needs at least 2 samples");
    std::optional<GaussianSystem> gauss;
    if (system.kind == SystemKind::gaussian)
        gauss.emplace(std::vector<GroupWord>{g});

    std::uint64_t seed = budget.seed;
    auto moments = reduce_blocks(budget.samples, budget.workers,
                                 [&](std::size_t, std::size_t begin, std::size_t end) {
        RunningMoments m;
        for (std::size_t i = begin; i < end; ++i) {
            double s = detail::draw_shift(system, g, gauss ? &*gauss : nullptr, seed, i);
            if (xi.is_interval_type()) {
                Interval const& target = eta.interval();
                CounterStream rng(combine(detail::sample_key(seed, i), 0x7e57ULL));
                double t = rng.uniform(target.lo, target.hi);
                double hit = xi.interval().contains(t + s) ? 1.0 : 0.0;
                m.add(ProfileVector::scaled(xi, eta, target.length() * hit));
            } else {
                m.add(detail::pair_kernel(xi, eta, s));
            }
        }
        return m;
    });
    return {moments.mean(), moments.stderr_of_mean(), Method::monte_carlo, budget.samples, seed};
}

// <pi(g) xi, eta>: exact/quadrature route when available, Monte Carlo when
// requested by the budget.
inline CoefficientEstimate coefficient(SystemSpec const& system, GroupWord const& g,
                                       ProfileVector const& xi, ProfileVector const& eta,
                                       Budget const& budget = {})
{
    detail::check_pair(system, xi, eta);
    if (g.rank() != system.rank)
        throw GroupError("word rank does not match the system rank");
    if (budget.preference == MethodPreference::monte_carlo)
        return coefficient_monte_carlo(system, g, xi, eta, budget);
    CoefficientEstimate est;
    est.value = detail::exact_pair_value(system, g, xi, eta, est.method);
    return est;
}

//---------------------------------------------------------------------------//
// Symmetric differences of windows

namespace detail {
inline Interval indicator_set(ProfileVector const& a)
{
    if (!a.is_interval_type())
        throw UnsupportedProfile("symmetric difference needs an indicator or window profile, got " +
                                 a.to_string());
    return a.interval();
}
}  // namespace detail

// mu(beta_g A delta A) = 2 (mu(A) - <pi(g) chi_A, chi_A>) for A = Omega x I.
inline double symmetric_difference(SystemSpec const& system, GroupWord const& g,
                                   ProfileVector const& a)
{
    Interval set = detail::indicator_set(a);
    auto chi = ProfileVector::indicator(set, Normalization::raw);
    double overlap = coefficient(system, g, chi, chi).value;
    double v = 2.0 * (set.length() - overlap);
    return v > 0.0 ? v : 0.0;
}

// Direct Monte Carlo of (mu x lambda)(beta_g A delta A): points (omega, t) with
// t uniform on a box containing both sets, membership tested through beta.
inline CoefficientEstimate symmetric_difference_monte_carlo(SystemSpec const& system,
                                                            GroupWord const& g,
                                                            ProfileVector const& a,
                                                            Budget const& budget)
{
    Interval set = detail::indicator_set(a);
    double reach = system.kind == SystemKind::orientation
                       ? static_cast<double>(g.length())
                       : 8.0 * CocycleLaw::of(g).sigma;
    Interval box(set.lo - reach - 1.0, set.hi + reach + 1.0);
    std::optional<GaussianSystem> gauss;
    if (system.kind == SystemKind::gaussian)
        gauss.emplace(std::vector<GroupWord>{g});
    GroupWord g_inv = inverse(g);

    std::uint64_t seed = budget.seed;
    auto moments = reduce_blocks(budget.samples, budget.workers,
                                 [&](std::size_t, std::size_t begin, std::size_t end) {
        RunningMoments m;
        for (std::size_t i = begin; i < end; ++i) {
            CounterStream rng(combine(detail::sample_key(seed, i), 0x7e57ULL));
            double t = rng.uniform(box.lo, box.hi);
            double pre_t;
            if (system.kind == SystemKind::orientation) {
                // beta_g^-1 (omega, t) lands in A iff (omega, t) lies in beta_g A.
                SkewPoint pt{Orientation(detail::sample_key(seed, i), system.measure()), t};
                pre_t = skew_step(g_inv, pt).t;
            } else {
                pre_t = t + gauss->sample(detail::sample_key(seed, i))[0];
            }
            bool in_image = set.contains(pre_t);
            bool in_set = set.contains(t);
            m.add(in_image != in_set ? box.length() : 0.0);
        }
        return m;
    });
    return {moments.mean(), moments.stderr_of_mean(), Method::monte_carlo, budget.samples, seed};
}

//---------------------------------------------------------------------------//
// Sweeps

// Words of length `radius`: the whole sphere when it has at most `cap`
// elements, otherwise `cap` distinct words drawn uniformly, sorted.
inline std::vector<GroupWord> shell_words(std::size_t radius, int rank, std::size_t cap,
                                          std::uint64_t seed)
{
    if (cap == 0 || sphere_size(radius, rank) <= cap)
        return sphere(radius, rank);
    CounterStream rng(combine(seed, 0x5ea11ULL + radius));
    std::set<GroupWord> picked;
    auto uniform_index = [&](std::size_t n) {
        return static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)) % n;
    };
    auto const k = static_cast<std::size_t>(rank);
    while (picked.size() < cap) {
        GroupWord w(rank);
        for (std::size_t pos = 0; pos < radius; ++pos) {
            if (pos == 0) {
                std::size_t idx = uniform_index(2 * k);
                w.push_back(static_cast<Letter>(idx < k ? idx + 1 : -static_cast<int>(idx - k + 1)));
            } else {
                // Any of the 2k - 1 letters that do not cancel the last one.
                std::size_t idx = uniform_index(2 * k - 1);
                std::vector<Letter> options;
                for (int i = 1; i <= rank; ++i) {
                    if (static_cast<Letter>(-i) != w.back())
                        options.push_back(static_cast<Letter>(i));
                    if (static_cast<Letter>(i) != w.back())
                        options.push_back(static_cast<Letter>(-i));
                }
                w.push_back(options[idx]);
            }
        }
        picked.insert(std::move(w));
    }
    return {picked.begin(), picked.end()};
}

struct WordRecord
{
    std::size_t radius = 0;
    GroupWord word;
    CoefficientEstimate estimate;
};

struct DecayRow
{
    std::size_t radius = 0;
    std::size_t count = 0;
    bool exhaustive = false;
    double min = 0.0;
    double mean = 0.0;
    double max = 0.0;
};

struct DecayCurve
{
    std::string system;
    std::string profile;
    std::vector<DecayRow> rows;
    std::vector<WordRecord> records;
};

inline DecayCurve decay_sweep(SystemSpec const& system, ProfileVector const& profile,
                              std::size_t max_radius, std::size_t per_shell_cap,
                              Budget const& budget = {})
{
    if (max_radius < 1)
        throw std::invalid_argument("max_radius must be >= 1");
    DecayCurve curve{system.label(), profile.to_string(), {}, {}};
    for (std::size_t radius = 1; radius <= max_radius; ++radius) {
        auto words = shell_words(radius, system.rank, per_shell_cap, budget.seed);
        DecayRow row{radius, words.size(), words.size() == sphere_size(radius, system.rank),
                     0.0, 0.0, 0.0};
        KahanSum total;
        bool first = true;
        for (auto const& w : words) {
            Budget word_budget = budget;
            word_budget.seed = combine(budget.seed, WordHash{}(w));
            auto est = coefficient(system, w, profile, profile, word_budget);
            if (est.method != Method::monte_carlo)
                est.seed = word_budget.seed;
            total.add(est.value);
            row.min = first ? est.value : std::min(row.min, est.value);
            row.max = first ? est.value : std::max(row.max, est.value);
            first = false;
            curve.records.push_back({radius, w, est});
        }
        row.mean = total.value() / static_cast<double>(words.size());
        curve.rows.push_back(row);
    }
    return curve;
}

struct SweepRow
{
    std::string system;
    std::size_t ball_radius = 0;
    std::size_t n = 0;
    double sup_defect = 0.0;
    double bound = 0.0;
};

using SweepTable = std::vector<SweepRow>;

// Certified bound on sup_{|g| <= R} (1 - <pi(g) xi_n, xi_n>): |s| <= R for
// orientations, E|X| / 2n for the Gaussian system.
inline double almost_invariance_bound(SystemSpec const& system, std::size_t radius, std::size_t n)
{
    auto r = static_cast<double>(radius);
    auto nn = static_cast<double>(n);
    if (system.kind == SystemKind::orientation)
        return r / (2.0 * nn);
    return std::sqrt(r) / (nn * std::sqrt(2.0 * std::numbers::pi));
}

inline SweepTable almost_invariant_sweep(SystemSpec const& system, std::size_t ball_radius,
                                         std::vector<std::size_t> const& window_sizes,
                                         std::size_t per_shell_cap = 0, std::uint64_t seed = 1)
{
    for (auto n : window_sizes)
        if (n < 1)
            throw std::invalid_argument("window sizes must be >= 1");
    std::vector<GroupWord> words;
    for (std::size_t r = 0; r <= ball_radius; ++r) {
        auto shell = shell_words(r, system.rank, per_shell_cap, seed);
        words.insert(words.end(), shell.begin(), shell.end());
    }
    SweepTable table;
    for (auto n : window_sizes) {
        auto xi = ProfileVector::window(n);
        double sup = 0.0;
        for (auto const& w : words) {
            double d = system.kind == SystemKind::orientation
                           ? exact_window_defect(w.length(), n, system.p)
                           : 1.0 - coefficient(system, w, xi, xi).value;
            sup = std::max(sup, d);
        }
        table.push_back({system.label(), ball_radius, n, sup,
                         almost_invariance_bound(system, ball_radius, n)});
    }
    return table;
}

//---------------------------------------------------------------------------//
// CSV

inline std::string format_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline constexpr char const* kDecayHeader = "system,profile,radius,word,method,value,stderr,samples,seed";
inline constexpr char const* kSweepHeader = "system,ball_radius,n,sup_defect,bound";

namespace detail {
// Fields containing commas are quoted.
inline std::string csv_field(std::string const& s)
{
    if (s.find_first_of(",\"") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += "\"\"";
        else
            out.push_back(c);
    }
    return out + "\"";
}

inline std::vector<std::string> split_csv_line(std::string const& line)
{
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

inline void write_file(std::string const& path, std::string const& contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << contents;
    out.flush();
    if (!out)
        throw IoError("failed writing '" + path + "'");
}
}  // namespace detail

inline std::string to_csv(DecayCurve const& curve)
{
    std::ostringstream os;
    os << kDecayHeader << '\n';
    for (auto const& r : curve.records) {
        os << detail::csv_field(curve.system) << ',' << detail::csv_field(curve.profile) << ','
           << r.radius << ',' << r.word.to_string() << ',' << to_string(r.estimate.method) << ','
           << format_real(r.estimate.value) << ',' << format_real(r.estimate.stderr_) << ','
           << r.estimate.samples << ',' << r.estimate.seed << '\n';
    }
    return os.str();
}

inline std::string to_csv(SweepTable const& table)
{
    std::ostringstream os;
    os << kSweepHeader << '\n';
    for (auto const& r : table) {
        os << detail::csv_field(r.system) << ',' << r.ball_radius << ',' << r.n << ','
           << format_real(r.sup_defect) << ',' << format_real(r.bound) << '\n';
    }
    return os.str();
}

inline void emit_csv(DecayCurve const& curve, std::string const& path)
{
    detail::write_file(path, to_csv(curve));
}

inline void emit_csv(SweepTable const& table, std::string const& path)
{
    detail::write_file(path, to_csv(table));
}

// Reads the per-word records of a decay CSV back. Summary rows are not stored
// in the file and come back empty.
inline DecayCurve read_decay_csv(std::istream& in, int rank = 2)
{
    std::string line;
    if (!std::getline(in, line) || line != kDecayHeader)
        throw IoError("missing or unexpected decay CSV header");
    DecayCurve curve;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto f = detail::split_csv_line(line);
        if (f.size() != 9)
            throw IoError("decay CSV row has " + std::to_string(f.size()) + " fields");
        curve.system = f[0];
        curve.profile = f[1];
        WordRecord rec;
        rec.radius = std::stoul(f[2]);
        rec.word = parse_word(f[3] == "e" ? "" : f[3], rank);
        if (f[4] == "exact")
            rec.estimate.method = Method::exact;
        else if (f[4] == "quadrature")
            rec.estimate.method = Method::quadrature;
        else if (f[4] == "monte-carlo")
            rec.estimate.method = Method::monte_carlo;
        else
            throw IoError("unknown method '" + f[4] + "'");
        rec.estimate.value = std::stod(f[5]);
        rec.estimate.stderr_ = std::stod(f[6]);
        rec.estimate.samples = std::stoul(f[7]);
        rec.estimate.seed = std::stoull(f[8]);
        curve.records.push_back(std::move(rec));
    }
    return curve;
}

}  // namespace treelab
