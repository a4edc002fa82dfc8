#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace bassnet {

// splitmix64 output function: one full step (golden-ratio increment + mix)
// applied to z.  Used both as a stream mixer and as the counter hash for
// reproducible, order-independent uniforms.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline double u01_from_bits(std::uint64_t x) {
    return double(x >> 11) * 0x1.0p-53; // 53-bit uniform in [0, 1)
}

// xoshiro256++ seeded from (seed, stream); distinct streams are mixed apart
// before expansion so consecutive stream ids do not share state words.
class Xoshiro256PP {
public:
    using result_type = std::uint64_t;
    explicit Xoshiro256PP(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t x = splitmix64_mix(seed) ^ splitmix64_mix(stream ^ 0x5851F42D4C957F2DULL);
        for (auto& w : s_) {
            x += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            w = z ^ (z >> 31);
        }
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9E3779B97F4A7C15ULL;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    double u01() { return u01_from_bits((*this)()); }

    // Exp(1) via inverse transform; u01() < 1 keeps the argument in (0, 1].
    double exp1() { return -std::log1p(-u01()); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::array<std::uint64_t, 4> s_{};
};

// Counter-based uniform stream: u01(n) depends only on (seed, stream, n),
// so draws can be assigned to fixed (step, node) slots.  This gives the
// synchronous simulation scheme a common-random-numbers coupling across
// networks of equal size.
class CounterStream {
public:
    explicit CounterStream(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(splitmix64_mix(seed ^ 0x6A09E667F3BCC909ULL) ^
               splitmix64_mix(stream ^ 0xBB67AE8584CAA73BULL)) {}

    double u01(std::uint64_t counter) const {
        return u01_from_bits(splitmix64_mix(key_ ^ splitmix64_mix(counter)));
    }

private:
    std::uint64_t key_;
};

} // namespace bassnet
