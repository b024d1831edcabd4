#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace biaslens {

// Deterministic RNG with explicit stream derivation. std::mt19937_64 output
// is fully specified by the standard; bounded draws and shuffles are done
// here by hand because std::uniform_int_distribution and std::shuffle are
// implementation-defined, which would break the byte-identical-report
// contract across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(mix(seed)) {}

    // Independent stream for (seed, index); used so parallel work items
    // produce results independent of scheduling.
    static Rng derive(std::uint64_t seed, std::uint64_t stream) {
        return Rng(mix(seed) ^ mix(stream * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, n) via rejection sampling; n must be > 0.
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t limit = ~0ULL - (~0ULL % n);
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return v % n;
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (cosine branch only).
    double gauss();

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices drawn uniformly from [0, n), returned sorted.
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

private:
    static std::uint64_t mix(std::uint64_t x) {
        // splitmix64 finalizer
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 gen_;
};

}  // namespace biaslens
