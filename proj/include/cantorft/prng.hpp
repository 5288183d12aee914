#pragma once

// Seeded deterministic randomness for sampled sweeps. Raw mt19937_64 draws
// are mapped to doubles by hand so reports are byte-identical across
// standard libraries (std::uniform_real_distribution is not portable).

#include <cstdint>
#include <random>

namespace cantorft {

class Prng {
public:
    explicit Prng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0, 1)
    double next_unit() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // uniform in (-1, 1), excluding the exact endpoints
    double next_signed_unit() {
        double u = 2.0 * next_unit() - 1.0;
        return u;
    }

    // uniform integer in [0, n)
    std::uint64_t next_below(std::uint64_t n) {
        return eng_() % n;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace cantorft
