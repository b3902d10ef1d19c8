#pragma once

#include <cstdint>

namespace dghom {

// Deterministic PRNG (splitmix64). Used instead of <random> engines so that
// identical seeds give identical streams on every platform and standard
// library; generated instance documents must be byte-stable.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, n), n > 0; unbiased via rejection
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t lim = ~0ull - ~0ull % n;
        std::uint64_t v;
        do { v = next(); } while (v >= lim);
        return v % n;
    }

    long range(long lo, long hi) { // inclusive
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool chance(unsigned num, unsigned den) { return below(den) < num; }

    // stable derived stream, e.g. per corpus index
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
        Rng r(seed ^ (0x632be59bd9b4e019ull + salt * 0x9e3779b97f4a7c15ull));
        return r.next();
    }

  private:
    std::uint64_t state_;
};

} // namespace dghom
