#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace fedkm {

/// Deterministic random stream. mt19937_64 core with explicitly coded
/// uniform/Gaussian transforms so a given seed yields the same sequence on
/// every platform (std:: distributions are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    /// Unbiased integer in [0, n). n must be > 0.
    std::uint64_t uniform_below(std::uint64_t n);

    /// Standard normal via Box-Muller. Consumes two uniforms per call.
    double gaussian();

    /// Circularly-symmetric complex Gaussian, unit total variance
    /// (variance 1/2 per real dimension).
    std::complex<double> complex_gaussian();

    /// One of {1, i, -1, -i}, uniformly.
    std::complex<double> qpsk();

private:
    std::mt19937_64 engine_;
};

/// Splitmix64 finalizer; bijective on u64.
std::uint64_t mix64(std::uint64_t z);

/// Hierarchical seed derivation: child stream seed from a base seed plus up
/// to three tags (stream purpose, round, device index, ...). Different tag
/// tuples give statistically independent streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag0,
                          std::uint64_t tag1 = 0, std::uint64_t tag2 = 0);

/// Stream purpose tags used project-wide.
namespace stream {
inline constexpr std::uint64_t kRound = 1;
inline constexpr std::uint64_t kQpsk = 2;
inline constexpr std::uint64_t kChannel = 3;
inline constexpr std::uint64_t kNoise = 4;
inline constexpr std::uint64_t kServer = 5;
inline constexpr std::uint64_t kScenario = 6;
inline constexpr std::uint64_t kRun = 7;
}  // namespace stream

}  // namespace fedkm
