#ifndef SCDEPTH_RNG_HPP
#define SCDEPTH_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace scdepth {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Hash an ordered tuple of keys into a single 64-bit seed.
constexpr std::uint64_t hash_keys(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = mix64(seed);
    for (auto k : keys) {
        h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
    }
    return h;
}

/**
 * Seedable random stream with keyed substreams.
 *
 * A stream is identified by its 64-bit key. `derive(k)` returns a fresh
 * stream whose key is a hash of the parent key and `k`; it does not consume
 * any state of the parent, so substreams are independent of the order in
 * which they are requested. This is what makes sweeps reproducible when
 * trials run on different workers.
 *
 * Satisfies UniformRandomBitGenerator so it can drive the `<random>`
 * distributions directly.
 */
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : key_(seed), engine_(mix64(seed)) {}

    Rng derive(std::uint64_t k) const { return Rng(hash_keys(key_, {k})); }

    Rng derive(std::initializer_list<std::uint64_t> keys) const { return Rng(hash_keys(key_, keys)); }

    std::uint64_t key() const noexcept { return key_; }

    result_type operator()() { return engine_(); }

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }

    /// Uniform real in [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

private:
    std::uint64_t key_;
    std::mt19937_64 engine_;
};

} // namespace scdepth

#endif
