#pragma once

#include <cstdint>
#include <limits>

namespace swarmfield {

/// splitmix64: a counter-based 64-bit generator (Weyl sequence plus an
/// avalanching finalizer). Each (seed, stream) pair gives an independent
/// sequence, so per-agent streams stay bit-identical under any execution
/// order. Satisfies UniformRandomBitGenerator for use with <random>
/// distributions.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return ((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Hashes words into a stream key; used to derive per-agent, per-step
/// generator states from (seed, stream indices).
inline std::uint64_t mix_stream(std::uint64_t a, std::uint64_t b = 0,
                                std::uint64_t c = 0) {
    auto finalize = [](std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t k = finalize(a + 0x9e3779b97f4a7c15ULL);
    k = finalize(k ^ (b + 0x9e3779b97f4a7c15ULL));
    k = finalize(k ^ (c + 0x9e3779b97f4a7c15ULL));
    return k;
}

}  // namespace swarmfield
