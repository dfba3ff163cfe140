#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace votelib::rng {

// splitmix64 step; also used as the avalanche finalizer for derived keys.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic random stream. All randomness in the library flows through
/// streams derived from (seed, addressing parts) so results are independent
/// of evaluation order and worker count.
class Stream {
public:
    explicit Stream(std::uint64_t state) : state_(state) {}

    std::uint64_t next() { return splitmix64(state_); }

    // Unbiased draw in [0, bound). bound must be >= 1.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
        for (;;) {
            const std::uint64_t x = next();
            if (x <= limit) return x % bound;
        }
    }

    // Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return unit() < p; }

    // Fisher-Yates; never use std::shuffle here (not reproducible across
    // standard library implementations).
    template <class T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            using std::swap;
            swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t state_;
};

namespace detail {

inline std::uint64_t absorb(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (i * 8)) & 0xffu;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t absorb(std::uint64_t h, std::string_view s) {
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    // Length tag keeps ("ab","c") distinct from ("a","bc").
    return absorb(h, static_cast<std::uint64_t>(s.size()));
}

inline std::uint64_t absorb(std::uint64_t h, int v) {
    return absorb(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(v)));
}

}  // namespace detail

/// Derives an independent stream from a base seed plus addressing parts
/// (tags, question ids, agent indices, run numbers, ...).
template <class... Parts>
Stream stream_for(std::uint64_t seed, const Parts&... parts) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    h = detail::absorb(h, seed);
    ((h = detail::absorb(h, parts)), ...);
    std::uint64_t s = h;
    splitmix64(s);
    return Stream(s);
}

/// Derived child seed, for handing a whole component its own seed space.
template <class... Parts>
std::uint64_t derive_seed(std::uint64_t seed, const Parts&... parts) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    h = detail::absorb(h, seed);
    ((h = detail::absorb(h, parts)), ...);
    std::uint64_t s = h;
    return splitmix64(s);
}

}  // namespace votelib::rng
