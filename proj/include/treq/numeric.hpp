#pragma once

// Deterministic numerics shared across the library: a self-contained PRNG
// (identical streams on every platform, unlike std distributions) and a
// pairwise summation used wherever many log-probabilities are accumulated.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace treq {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256** seeded through splitmix64.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, bound), unbiased via rejection.
    int next_int(int bound) {
        if (bound <= 0) throw std::invalid_argument("Rng::next_int: bound must be positive");
        const std::uint64_t b = static_cast<std::uint64_t>(bound);
        const std::uint64_t limit = (~std::uint64_t{0} / b) * b;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return static_cast<int>(x % b);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

// Decorrelates replica streams from a single experiment seed. Streams are
// stable across runs and independent of execution order.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t a = seed;
    std::uint64_t b = stream ^ 0x632be59bd9b4e019ULL;
    const std::uint64_t mixed = splitmix64(a) ^ (splitmix64(b) * 0xd1342543de82ef95ULL);
    return Rng(mixed);
}

// Pairwise (cascade) summation; error grows like log(n) rather than n.
inline double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    if (n <= 4) {
        double s = values[0];
        for (std::size_t i = 1; i < n; ++i) s += values[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& values) {
    return pairwise_sum(std::span<const double>(values));
}

// Execution policy for the data-parallel kernels. Serial is the reference
// path kept for testing; both produce bit-identical results.
enum class Exec { Serial, Parallel };

}  // namespace treq
