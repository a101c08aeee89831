// treelab: batch driver for the tree-dynamics experiments.
//
//   treelab decay    --system orientation --p 0.7 --profile gaussian --max-radius 20
//   treelab window   --system gaussian --max-radius 4 --n 10,100,1000
//   treelab gram     --max-radius 3 --samples 100000
//   treelab hs       --seed 7
//   treelab selftest [-v] [--inject-fault]
//
// Every experiment subcommand also accepts --config FILE (key = value lines);
// flags given on the command line override the file.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

struct FlagSet
{
    std::string config_path;
    std::map<std::string, std::string> values;
};

void add_experiment_flags(CLI::App* sub, FlagSet& flags)
{
    sub->add_option("--config", flags.config_path, "key = value configuration file");
    struct Spec
    {
        char const* flag;
        char const* key;
        char const* help;
    };
    static constexpr Spec specs[] = {
        {"--system", "system", "orientation | gaussian"},
        {"--rank", "rank", "free group rank k (>= 2)"},
        {"--p", "p", "orientation bias in (0,1)"},
        {"--profile", "profile", "window:<n> | cauchy | gaussian | indicator:<lo>:<hi>"},
        {"--max-radius", "max_radius", "largest word length / ball radius"},
        {"--shell-cap", "shell_cap", "words sampled per shell (0 = all)"},
        {"--n", "n", "comma-separated window sizes"},
        {"--samples", "samples", "Monte Carlo samples"},
        {"--seed", "seed", "random seed"},
        {"--workers", "workers", "worker threads"},
        {"--method", "method", "auto | mc"},
        {"--out", "out", "output CSV path (default stdout)"},
    };
    for (auto const& s : specs)
        sub->add_option(s.flag, flags.values[s.key], s.help);
}

int load_config(CLI::App const* sub, FlagSet const& flags, treelab::ExperimentConfig& config)
{
    try {
        if (!flags.config_path.empty()) {
            std::ifstream in(flags.config_path);
            if (!in) {
                std::cerr << "error: cannot read config '" << flags.config_path << "'\n";
                return treelab::cli::kIoFailure;
            }
            config = treelab::parse_config(in);
        }
        for (auto const& [key, value] : flags.values) {
            std::string flag = "--" + key;
            for (auto& c : flag)
                if (c == '_')
                    c = '-';
            if (sub->count(flag) > 0)
                treelab::apply_setting(config, key, value);
        }
    } catch (std::invalid_argument const& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return treelab::cli::kInvalid;
    }
    return treelab::cli::kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"treelab: C0 dynamical systems for free groups acting on trees"};
    app.require_subcommand(1);

    FlagSet decay_flags, window_flags, gram_flags, hs_flags;
    auto* decay = app.add_subcommand("decay", "coefficient decay over word-length shells");
    add_experiment_flags(decay, decay_flags);
    auto* window = app.add_subcommand("window", "almost-invariance sweep over window sizes");
    add_experiment_flags(window, window_flags);
    auto* gram = app.add_subcommand("gram", "Gromov-product Gram matrix and sampled covariance");
    add_experiment_flags(gram, gram_flags);
    auto* hs = app.add_subcommand("hs", "Hilbert-Schmidt adjoint-action identities");
    add_experiment_flags(hs, hs_flags);

    auto* selftest = app.add_subcommand("selftest", "run every invariant suite");
    int verbosity = 1;
    bool quiet = false;
    bool inject_fault = false;
    selftest->add_flag("-q,--quiet", quiet, "only print failures");
    selftest->add_flag("--inject-fault", inject_fault,
                       "flip a sign inside projection_defect (mutation smoke test)");

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : treelab::cli::kInvalid;
    }

    if (selftest->parsed())
        return treelab::cli::cmd_selftest(quiet ? 0 : verbosity, inject_fault);

    struct Entry
    {
        CLI::App* sub;
        FlagSet* flags;
        int (*run)(treelab::ExperimentConfig const&, std::ostream&);
    };
    Entry const entries[] = {
        {decay, &decay_flags, treelab::cli::cmd_decay},
        {window, &window_flags, treelab::cli::cmd_window},
        {gram, &gram_flags, treelab::cli::cmd_gram},
        {hs, &hs_flags, treelab::cli::cmd_hs},
    };
    for (auto const& e : entries) {
        if (!e.sub->parsed())
            continue;
        treelab::ExperimentConfig config;
        if (int rc = load_config(e.sub, *e.flags, config); rc != 0)
            return rc;
        return e.run(config, std::cerr);
    }
    return treelab::cli::kInvalid;
}
