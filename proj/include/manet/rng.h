#ifndef MANET_RNG_H
#define MANET_RNG_H

#include <cstdint>
#include <random>

namespace manet
{

/**
 * Consumers of randomness. Each (kind, index) pair gets its own substream so
 * that changing one consumer never perturbs the draws of another.
 */
enum class StreamKind : std::uint32_t
{
    Mobility = 1,
    Traffic = 2,
    MacJitter = 3,
    Loss = 4,
    Topology = 5,
};

/// Stable seed mixing (splitmix64 finalizer chained over the inputs).
std::uint64_t MixSeed(std::uint64_t seed, StreamKind kind, std::uint64_t index);

/**
 * Seeded random stream. Built on std::mt19937_64, whose output sequence is
 * fixed by the standard; the conversions to doubles and bounded integers are
 * done here rather than through <random> distributions so results are the
 * same on every standard library.
 */
class RngStream
{
  public:
    RngStream(std::uint64_t seed, StreamKind kind, std::uint64_t index = 0);

    std::uint64_t NextU64();

    /// Uniform on [0, 1) with 53 bits of resolution.
    double Uniform();
    /// Uniform on [lo, hi).
    double Uniform(double lo, double hi);
    /// Uniform integer on [0, n). n must be positive.
    std::uint64_t UniformInt(std::uint64_t n);
    /// True with probability p.
    bool Bernoulli(double p);

  private:
    std::mt19937_64 m_engine;
};

} // namespace manet

#endif // MANET_RNG_H
