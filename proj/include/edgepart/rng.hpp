#pragma once

#include <cstdint>

namespace edgepart {

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based stream: the state is a pure function of (seed, counter, stream),
/// so draws for one trial never depend on how many other trials ran before it.
/// Output mapping is fixed here (not std distributions) so results are
/// identical across standard libraries.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t counter, std::uint64_t stream)
        : state_(splitmix64(seed ^ splitmix64(counter ^ splitmix64(stream + 0x632be59bd9b4e019ULL))))
    {}

    std::uint64_t next()
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

} // namespace edgepart
