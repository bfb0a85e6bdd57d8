#ifndef PUNCT_RNG_HPP
#define PUNCT_RNG_HPP

#include <cstdint>
#include <random>

namespace punct {

// splitmix64; used to derive well-mixed seeds from (master_seed, ordinal).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t ordinal) {
    return splitmix64(master_seed ^ splitmix64(ordinal + 1));
}

// mt19937_64 is bit-exact across platforms; the standard distributions are
// not, so draws are built directly from engine output.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer in [0, bound) via rejection-free modulo; the tiny bias
    // is irrelevant here and the result is fully deterministic.
    std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[static_cast<std::size_t>(below(i))]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace punct

#endif  // PUNCT_RNG_HPP
