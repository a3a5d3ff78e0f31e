#pragma once

#include <cstdint>
#include <vector>

namespace lexdiv {

// SplitMix64. All seeded behavior in this project (subset selection,
// random sampling, intervention draws) goes through this generator so that
// identical seeds give identical results on every platform. The update and
// output functions are fixed; see README "Determinism" for the exact spec.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform draw in [0, bound) by modulo reduction. bound must be > 0.
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

  private:
    std::uint64_t state_;
};

// In-place Fisher-Yates shuffle driven by SplitMix64: for i = n-1 .. 1,
// swap items[i] with items[rng.next() % (i+1)].
template <typename T>
void fisher_yates_shuffle(std::vector<T>& items, SplitMix64& rng) {
    if (items.size() < 2) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_below(i + 1));
        std::swap(items[i], items[j]);
    }
}

// 0..n-1 in seeded-shuffle order.
inline std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    SplitMix64 rng(seed);
    fisher_yates_shuffle(idx, rng);
    return idx;
}

}  // namespace lexdiv
