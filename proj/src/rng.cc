#include "manet/rng.h"

#include <stdexcept>

namespace manet
{

namespace
{

std::uint64_t
SplitMix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t
MixSeed(std::uint64_t seed, StreamKind kind, std::uint64_t index)
{
    std::uint64_t h = SplitMix(seed);
    h = SplitMix(h ^ static_cast<std::uint64_t>(kind));
    h = SplitMix(h ^ index);
    return h;
}

RngStream::RngStream(std::uint64_t seed, StreamKind kind, std::uint64_t index)
    : m_engine(MixSeed(seed, kind, index))
{
}

std::uint64_t
RngStream::NextU64()
{
    return m_engine();
}

double
RngStream::Uniform()
{
    return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
}

double
RngStream::Uniform(double lo, double hi)
{
    return lo + (hi - lo) * Uniform();
}

std::uint64_t
RngStream::UniformInt(std::uint64_t n)
{
    if (n == 0)
    {
        throw std::invalid_argument("UniformInt: empty range");
    }
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do
    {
        x = m_engine();
    } while (x >= limit);
    return x % n;
}

bool
RngStream::Bernoulli(double p)
{
    if (p <= 0.0)
    {
        return false;
    }
    if (p >= 1.0)
    {
        return true;
    }
    return Uniform() < p;
}

} // namespace manet
