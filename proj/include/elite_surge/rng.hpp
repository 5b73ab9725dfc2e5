#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace elite_surge {

/// Mixes a base seed with a stream tag into a fresh 64-bit seed (splitmix64).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic random source. All draws go through hand-rolled
/// transformations of the mt19937_64 output so that a given seed yields the
/// same sequence on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal draw (Box-Muller, one spare cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    /// Uniform integer in [0, n). Requires n > 0.
    std::int64_t below(std::int64_t n) {
        const auto x = static_cast<unsigned __int128>(engine_());
        return static_cast<std::int64_t>((x * static_cast<unsigned __int128>(n)) >> 64);
    }

    /// Independent generator derived from this one's seed and a stream tag.
    Rng stream(std::uint64_t tag) const { return Rng(derive_seed(seed_, tag)); }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace elite_surge
