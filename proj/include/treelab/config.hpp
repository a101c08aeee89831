#pragma once

// Experiment configuration: a flat key = value text format, one key per line,
// '#' starts a comment. Keys match the long command-line flags:
//
//   system     = orientation | gaussian
//   rank       = integer >= 2
//   p          = orientation bias in (0, 1)
//   profile    = window:<n> | cauchy | gaussian | indicator:<lo>:<hi>
//   max_radius = 0..20 (decay needs >= 1)
//   shell_cap  = words per shell (0 = whole shell)
//   n          = comma-separated window sizes
//   samples    = Monte Carlo budget (>= 1000)
//   seed       = unsigned 64-bit seed
//   workers    = threads (>= 1)
//   method     = auto | mc
//   out        = output path

#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "treelab/koopman.hpp"
#include "treelab/profile.hpp"

namespace treelab {

class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig
{
    SystemKind system = SystemKind::orientation;
    int rank = 2;
    double p = 0.7;
    std::string profile = "gaussian";
    std::size_t max_radius = 20;
    std::size_t shell_cap = 8;
    std::vector<std::size_t> window_sizes{10, 100, 1000};
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    MethodPreference method = MethodPreference::automatic;
    std::string out;

    static constexpr std::size_t kMaxRadius = 20;

    friend bool operator==(ExperimentConfig const&, ExperimentConfig const&) = default;

    SystemSpec system_spec() const
    {
        return system == SystemKind::gaussian ? SystemSpec::gaussian(rank)
                                              : SystemSpec::orientation(p, rank);
    }

    Budget budget() const { return {samples, seed, workers, method}; }

    // Throws ConfigError naming the offending field.
    void validate() const
    {
        if (rank < 2 || rank > 26)
            throw ConfigError("rank: must be in 2..26, got " + std::to_string(rank));
        if (!(p > 0.0 && p < 1.0))
            throw ConfigError("p: must lie in (0,1), got " + format_real(p));
        if (max_radius > kMaxRadius)
            throw ConfigError("max_radius: must be at most " + std::to_string(kMaxRadius));
        if (samples < 1000)
            throw ConfigError("samples: must be >= 1000");
        if (workers < 1)
            throw ConfigError("workers: must be >= 1");
        if (window_sizes.empty())
            throw ConfigError("n: at least one window size is required");
        for (auto n : window_sizes)
            if (n < 1)
                throw ConfigError("n: window sizes must be >= 1");
        try {
            (void)parse_profile(profile);
        } catch (std::invalid_argument const& e) {
            throw ConfigError(std::string("profile: ") + e.what());
        }
    }
};

inline std::string join_sizes(std::vector<std::size_t> const& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

inline std::vector<std::size_t> parse_sizes(std::string const& text)
{
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (std::exception const&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || item.front() == '-')
            throw ConfigError("n: bad window size '" + item + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

inline std::string serialize(ExperimentConfig const& c)
{
    std::ostringstream os;
    os << "system = " << (c.system == SystemKind::gaussian ? "gaussian" : "orientation") << '\n'
       << "rank = " << c.rank << '\n'
       << "p = " << format_real(c.p) << '\n'
       << "profile = " << c.profile << '\n'
       << "max_radius = " << c.max_radius << '\n'
       << "shell_cap = " << c.shell_cap << '\n'
       << "n = " << join_sizes(c.window_sizes) << '\n'
       << "samples = " << c.samples << '\n'
       << "seed = " << c.seed << '\n'
       << "workers = " << c.workers << '\n'
       << "method = " << (c.method == MethodPreference::monte_carlo ? "mc" : "auto") << '\n'
       << "out = " << c.out << '\n';
    return os.str();
}

// Applies one key/value pair; flags and file lines share this path.
inline void apply_setting(ExperimentConfig& c, std::string const& key, std::string const& value)
{
    auto as_u64 = [&](std::string const& field) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(value, &used);
        } catch (std::exception const&) {
            used = 0;
        }
        if (used == 0 || used != value.size() || value.front() == '-')
            throw ConfigError(field + ": expected a non-negative integer, got '" + value + "'");
        return v;
    };

    if (key == "system") {
        if (value == "orientation")
            c.system = SystemKind::orientation;
        else if (value == "gaussian")
            c.system = SystemKind::gaussian;
        else
            throw ConfigError("system: expected orientation or gaussian, got '" + value + "'");
    } else if (key == "rank") {
        c.rank = static_cast<int>(as_u64("rank"));
    } else if (key == "p") {
        std::size_t used = 0;
        try {
            c.p = std::stod(value, &used);
        } catch (std::exception const&) {
            used = 0;
        }
        if (used == 0 || used != value.size())
            throw ConfigError("p: expected a number, got '" + value + "'");
    } else if (key == "profile") {
        c.profile = value;
    } else if (key == "max_radius" || key == "max-radius") {
        c.max_radius = as_u64("max_radius");
    } else if (key == "shell_cap" || key == "shell-cap") {
        c.shell_cap = as_u64("shell_cap");
    } else if (key == "n") {
        c.window_sizes = parse_sizes(value);
    } else if (key == "samples") {
        c.samples = as_u64("samples");
    } else if (key == "seed") {
        c.seed = as_u64("seed");
    } else if (key == "workers") {
        c.workers = static_cast<unsigned>(as_u64("workers"));
    } else if (key == "method") {
        if (value == "auto")
            c.method = MethodPreference::automatic;
        else if (value == "mc")
            c.method = MethodPreference::monte_carlo;
        else
            throw ConfigError("method: expected auto or mc, got '" + value + "'");
    } else if (key == "out") {
        c.out = value;
    } else {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
}

inline ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {})
{
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

inline ExperimentConfig parse_config(std::string const& text, ExperimentConfig base = {})
{
    std::istringstream in(text);
    return parse_config(in, std::move(base));
}

}  // namespace treelab
