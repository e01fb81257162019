#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "qshess/types.hpp"

namespace qshess {

// Deterministic random source for test matrices and starting points.
// mt19937_64 plus a hand-rolled Box-Muller: std::normal_distribution is not
// bit-reproducible across standard libraries, and the experiment CSVs are
// required to be byte-identical run to run.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() {
        // 53-bit mantissa in [0, 1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    cx cnormal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace qshess
