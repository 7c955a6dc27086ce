#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dilute::lab {

// Seed mixing for replicate streams. splitmix64 is the reference finalizer
// (Steele-Lea-Flood); applying it to master ^ (rep+1)*phi decorrelates the
// per-replicate engines regardless of scheduling order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t rep_seed(std::uint64_t master, unsigned rep) {
    return splitmix64(splitmix64(master) ^ (rep + 1) * 0x9E3779B97F4A7C15ULL);
}

// mt19937_64 with the distribution plumbing done by hand: the standard pins
// the engine's state transition but not the library distributions, and the
// reproducibility contract is byte-level across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on [0, 1): top 53 bits scaled, so 1.0 is never returned.
    double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform on {0, ..., n-1} by rejection, bias-free.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t limit = ~0ULL - ~0ULL % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

} // namespace dilute::lab
