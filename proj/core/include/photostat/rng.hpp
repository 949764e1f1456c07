#ifndef PHOTOSTAT_RNG_HPP
#define PHOTOSTAT_RNG_HPP

#include <cstdint>
#include <limits>

namespace photostat {

/// Counter-based pseudo-random stream addressable by
/// (master_seed, image_index, stage, position). Output i of a stream is
/// the SplitMix64 finalizer applied to key + i*gamma, i.e. random access
/// into a SplitMix64 sequence whose seed is a mix of the four key
/// components. Identical keys give identical streams regardless of
/// thread scheduling, which is what makes merged parallel runs
/// bit-reproducible.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t master_seed, std::uint64_t image_index,
              std::uint64_t stage, std::uint64_t position)
        : key_(derive_key(master_seed, image_index, stage, position)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix(key_ + (++counter_) * kGamma); }

    /// Uniform in [0, 1) with 53 random bits.
    double next_double() { return double((*this)() >> 11) * 0x1.0p-53; }

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t image,
                                    std::uint64_t stage, std::uint64_t position) {
        std::uint64_t h = mix(seed + kGamma);
        h = mix(h ^ (image + kGamma));
        h = mix(h ^ (stage + kGamma));
        h = mix(h ^ (position + kGamma));
        return h;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace photostat

#endif
