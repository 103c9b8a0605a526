#ifndef CCB_RNG_HPP
#define CCB_RNG_HPP

#include <cstdint>
#include <random>

namespace ccb {

// splitmix64 step; used both for seed mixing and for seeding the engine.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derive an independent stream seed from (base, run index, algorithm id).
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t run,
                              std::uint64_t algo) {
    std::uint64_t s = base;
    std::uint64_t a = splitmix64(s);
    s ^= run * 0xd1342543de82ef95ULL;
    std::uint64_t b = splitmix64(s);
    s ^= algo * 0xaf251af3b0f025b5ULL;
    std::uint64_t c = splitmix64(s);
    return a ^ (b << 1) ^ (c >> 1);
}

// Deterministic uniform source. std::uniform_real_distribution is
// implementation-defined, so doubles are built from raw engine bits.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer in [0, m).
    std::uint64_t below(std::uint64_t m) {
        // Rejection-free would bias; m is tiny here so rejection is cheap.
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % m;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % m;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace ccb

#endif  // CCB_RNG_HPP
