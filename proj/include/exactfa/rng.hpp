#ifndef EXACTFA_RNG_HPP
#define EXACTFA_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace exactfa {

// SplitMix64 step; used to derive independent stream seeds per run index.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s = master ^ (0x6A09E667F3BCC909ull + index * 0x9E3779B97F4A7C15ull);
    std::uint64_t b = splitmix64(s);
    return a ^ b;
}

// Deterministic cross-platform random source: the (standard-pinned)
// mt19937_64 engine, explicit 53-bit uniform mapping, and Box-Muller
// normals. Everything downstream of a seed is bit-reproducible.
class PinnedRng {
public:
    explicit PinnedRng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // Uniform on [0, 1).
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1].
    double uniform01_open0() { return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01_open0();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace exactfa

#endif
