#pragma once

// Counter-based randomness. Every random quantity in the library is a pure
// function of (seed, key, counter), so Monte Carlo results do not depend on
// how work is split across threads.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <thread>
#include <vector>

namespace treelab {

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t combine(std::uint64_t a, std::uint64_t b) noexcept
{
    return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL));
}

// Maps the top 53 bits to [0, 1).
inline constexpr double to_unit(std::uint64_t bits) noexcept
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Sequential stream over one key; draw i is mix(key, i).
class CounterStream
{
  public:
    explicit CounterStream(std::uint64_t key) noexcept : key_(key) {}

    std::uint64_t next_u64() noexcept { return combine(key_, counter_++); }

    double uniform() noexcept { return to_unit(next_u64()); }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    // Box-Muller; the spare deviate is cached so draws come in pairs.
    double normal() noexcept
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

//---------------------------------------------------------------------------//
// Deterministic parallel reduction

struct RunningMoments
{
    std::size_t count = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double x) noexcept
    {
        ++count;
        sum += x;
        sum_sq += x * x;
    }

    void merge(RunningMoments const& other) noexcept
    {
        count += other.count;
        sum += other.sum;
        sum_sq += other.sum_sq;
    }

    double mean() const noexcept { return count ? sum / static_cast<double>(count) : 0.0; }

    // Unbiased sample variance.
    double variance() const noexcept
    {
        if (count < 2)
            return 0.0;
        double n = static_cast<double>(count);
        double m = sum / n;
        double v = (sum_sq - n * m * m) / (n - 1.0);
        return v > 0.0 ? v : 0.0;
    }

    double stderr_of_mean() const noexcept
    {
        return count ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
    }
};

inline constexpr std::size_t kMonteCarloBlock = 4096;

// Runs body(block_index) -> RunningMoments over fixed-size sample blocks and
// merges the partial results in block order. Block boundaries are independent
// of `workers`, so the result is bitwise identical for any worker count.
template <class BlockFn>
RunningMoments reduce_blocks(std::size_t samples, unsigned workers, BlockFn&& body)
{
    std::size_t blocks = (samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
    std::vector<RunningMoments> partial(blocks);
    auto run_block = [&](std::size_t b) {
        std::size_t begin = b * kMonteCarloBlock;
        std::size_t end = begin + kMonteCarloBlock < samples ? begin + kMonteCarloBlock : samples;
        partial[b] = body(b, begin, end);
    };

    if (workers <= 1 || blocks <= 1) {
        for (std::size_t b = 0; b < blocks; ++b)
            run_block(b);
    } else {
        std::vector<std::thread> pool;
        unsigned n = workers < blocks ? workers : static_cast<unsigned>(blocks);
        pool.reserve(n);
        for (unsigned w = 0; w < n; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t b = w; b < blocks; b += n)
                    run_block(b);
            });
        }
        for (auto& t : pool)
            t.join();
    }

    RunningMoments total;
    for (auto const& p : partial)
        total.merge(p);
    return total;
}

}  // namespace treelab
