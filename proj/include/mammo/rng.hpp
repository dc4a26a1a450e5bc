#pragma once

#include <cmath>
#include <cstdint>

namespace mammo {

// Counter-based generator: output i of a stream is a hash of (key, i), so a
// stream can be handed to any worker and replayed bit-exactly regardless of
// scheduling. Streams are keyed by (seed, stream id); photon batches, noise,
// and shuffles each get their own stream.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ull)))
    {
    }

    // murmur3/splitmix finalizer, bijective on u64
    static std::uint64_t mix64(std::uint64_t z)
    {
        z ^= z >> 33;
        z *= 0xff51afd7ed558ccdull;
        z ^= z >> 33;
        z *= 0xc4ceb9fe1a85ec53ull;
        z ^= z >> 33;
        return z;
    }

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGamma); }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

    // standard normal, Box-Muller with cached pair
    double normal()
    {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586477 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_ = 0;
    bool have_cached_ = false;
};

// Per-case seed: injective in k for a fixed base, so cohort seeds are
// pairwise distinct by construction.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k)
{
    return CounterRng::mix64(base + CounterRng::mix64(k + 1) * 0x9e3779b97f4a7c15ull);
}

} // namespace mammo
