#pragma once

// Subcommand bodies for the treelab driver. Each returns the process exit
// code: 0 ok, 1 self-test failure, 2 invalid configuration, 3 I/O failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "treelab/config.hpp"
#include "treelab/gaussian.hpp"
#include "treelab/hs.hpp"
#include "treelab/koopman.hpp"
#include "treelab/selftest.hpp"

namespace treelab::cli {

enum ExitCode : int { kOk = 0, kTestFailure = 1, kInvalid = 2, kIoFailure = 3 };

inline void write_output(ExperimentConfig const& config, std::string const& csv)
{
    if (config.out.empty() || config.out == "-") {
        std::cout << csv;
        std::cout.flush();
        if (!std::cout)
            throw IoError("failed writing to standard output");
        return;
    }
    detail::write_file(config.out, csv);
}

// Shared error mapping for the experiment subcommands.
template <class Body>
int guarded(Body&& body, std::ostream& err)
{
    try {
        body();
        return kOk;
    } catch (IoError const& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (std::invalid_argument const& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kInvalid;
    } catch (std::exception const& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    }
}

inline int cmd_decay(ExperimentConfig const& config, std::ostream& err = std::cerr)
{
    return guarded(
        [&] {
            config.validate();
            if (config.max_radius < 1)
                throw ConfigError("max_radius: decay needs max_radius >= 1");
            auto curve = decay_sweep(config.system_spec(), parse_profile(config.profile),
                                     config.max_radius, config.shell_cap, config.budget());
            write_output(config, to_csv(curve));
        },
        err);
}

inline int cmd_window(ExperimentConfig const& config, std::ostream& err = std::cerr)
{
    return guarded(
        [&] {
            config.validate();
            auto table = almost_invariant_sweep(config.system_spec(), config.max_radius,
                                                config.window_sizes, config.shell_cap, config.seed);
            write_output(config, to_csv(table));
        },
        err);
}

inline constexpr std::size_t kGramMaxWords = 400;
inline constexpr char const* kGramHeader = "i,j,word_i,word_j,gram,empirical_cov,stderr,jitter";

// Gram matrix of ball(max_radius) together with the empirical covariance of
// `samples` joint draws of the cocycle evaluations.
inline std::string gram_csv(ExperimentConfig const& config)
{
    std::size_t size = ball_size(config.max_radius, config.rank);
    if (size > kGramMaxWords)
        throw ConfigError("max_radius: ball of radius " + std::to_string(config.max_radius) +
                          " has " + std::to_string(size) + " words, more than " +
                          std::to_string(kGramMaxWords));
    auto words = ball(config.max_radius, config.rank);
    GaussianSystem sys(words);
    auto m = static_cast<Eigen::Index>(words.size());

    // Per-block sums of x_i x_j and (x_i x_j)^2, merged in block order.
    std::size_t blocks = (config.samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
    std::vector<Eigen::MatrixXd> second(blocks, Eigen::MatrixXd::Zero(m, m));
    std::vector<Eigen::MatrixXd> fourth(blocks, Eigen::MatrixXd::Zero(m, m));
    auto run_block = [&](std::size_t b) {
        std::size_t begin = b * kMonteCarloBlock;
        std::size_t end = std::min(begin + kMonteCarloBlock, config.samples);
        for (std::size_t i = begin; i < end; ++i) {
            auto x = sys.sample(combine(config.seed, i));
            Eigen::Map<Eigen::VectorXd> v(x.data(), m);
            Eigen::MatrixXd outer = v * v.transpose();
            second[b] += outer;
            fourth[b] += outer.cwiseProduct(outer);
        }
    };
    unsigned workers = std::max(1u, config.workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t b = w; b < blocks; b += workers)
                run_block(b);
        });
    for (auto& t : pool)
        t.join();
    Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd s4 = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t b = 0; b < blocks; ++b) {
        s2 += second[b];
        s4 += fourth[b];
    }

    auto n = static_cast<double>(config.samples);
    std::ostringstream os;
    os << kGramHeader << '\n';
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            double mean = s2(i, j) / n;
            double var = std::max(0.0, (s4(i, j) / n - mean * mean) * n / (n - 1.0));
            os << i << ',' << j << ',' << words[i].to_string() << ',' << words[j].to_string() << ','
               << format_real(sys.gram()(i, j)) << ',' << format_real(mean) << ','
               << format_real(std::sqrt(var / n)) << ',' << format_real(sys.jitter()) << '\n';
        }
    return os.str();
}

inline int cmd_gram(ExperimentConfig const& config, std::ostream& err = std::cerr)
{
    return guarded(
        [&] {
            config.validate();
            write_output(config, gram_csv(config));
        },
        err);
}

inline constexpr int kHsTrialsPerDim = 32;
inline constexpr char const* kHsHeader =
    "dim,trial,hs_defect,closed_form,abs_error,coefficient_abs,coefficient_bound";

// Projection-defect identity on seeded random orthogonal matrices and the
// rank-one coefficient bound on seeded complex unitaries, dimensions 2..16.
inline std::string hs_csv(ExperimentConfig const& config)
{
    std::ostringstream os;
    os << kHsHeader << '\n';
    for (Eigen::Index dim = 2; dim <= 16; ++dim)
        for (int trial = 0; trial < kHsTrialsPerDim; ++trial) {
            std::uint64_t key = combine(config.seed, static_cast<std::uint64_t>(dim * 1000 + trial));
            auto u = hs::random_orthogonal(dim, combine(key, 1));
            auto xi = hs::random_real_unit_vector(dim, combine(key, 2));
            double lhs = hs::projection_defect(u, xi);
            double rhs = hs::projection_defect_closed_form(u, xi);
            auto x1 = hs::random_gaussian_vector(dim, combine(key, 3));
            auto y1 = hs::random_gaussian_vector(dim, combine(key, 4));
            auto x2 = hs::random_gaussian_vector(dim, combine(key, 5));
            auto y2 = hs::random_gaussian_vector(dim, combine(key, 6));
            auto v = hs::random_unitary(dim, combine(key, 7));
            double coef = std::abs(hs::hs_coefficient(hs::rank_one(x1, y1), hs::rank_one(x2, y2), v));
            double bound = std::abs(hs::inner(v.apply(y2), y1)) * x1.norm() * x2.norm();
            os << dim << ',' << trial << ',' << format_real(lhs) << ',' << format_real(rhs) << ','
               << format_real(std::abs(lhs - rhs)) << ',' << format_real(coef) << ','
               << format_real(bound) << '\n';
        }
    return os.str();
}

inline int cmd_hs(ExperimentConfig const& config, std::ostream& err = std::cerr)
{
    return guarded(
        [&] {
            config.validate();
            write_output(config, hs_csv(config));
        },
        err);
}

inline int cmd_selftest(int verbosity, bool inject_fault, std::ostream& out = std::cout)
{
    hs::projection_defect_fault().store(inject_fault);
    int rc = run_selftest(out, verbosity);
    hs::projection_defect_fault().store(false);
    return rc;
}

}  // namespace treelab::cli
