#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace qshess {

using cx = std::complex<double>;

// Thrown when an input violates a structural precondition (a claimed
// quasiseparable representation that does not actually span the data, a
// malformed problem file, ...). Carries the offending column (0-based, -1 if
// not column-specific) and the measured residual.
class StructureError : public std::runtime_error {
public:
    StructureError(const std::string& what, int column = -1, double residual = 0.0)
        : std::runtime_error(what), column_(column), residual_(residual) {}
    int column() const noexcept { return column_; }
    double residual() const noexcept { return residual_; }

private:
    int column_;
    double residual_;
};

// Rotation work counter. One unit = one 2x1 vector pair rotated (so applying a
// core to a pair of length-m rows costs m units). All structured-path work is
// funneled through these, which is what makes the O(n^2 k) claims testable
// without a wall clock.
struct OpCounter {
    std::uint64_t units = 0;
    void add(std::uint64_t u) noexcept { units += u; }
};

// Complex value with the binary exponent carried separately
// (value = mantissa * 2^exp2), for determinants and other long products that
// overflow a double.
struct ScaledValue {
    cx mantissa{0.0, 0.0};
    long exp2 = 0;

    cx value() const { return std::ldexp(1.0, static_cast<int>(exp2)) * mantissa; }

    double log_abs() const {
        if (mantissa == cx{}) return -std::numeric_limits<double>::infinity();
        return std::log(std::abs(mantissa)) + static_cast<double>(exp2) * 0.6931471805599453;
    }

    ScaledValue& normalize() {
        const double m = std::abs(mantissa);
        if (m == 0.0 || !std::isfinite(m)) return *this;
        int e = 0;
        std::frexp(m, &e);
        if (e > 16 || e < -16) {
            mantissa = cx{std::ldexp(mantissa.real(), -e), std::ldexp(mantissa.imag(), -e)};
            exp2 += e;
        }
        return *this;
    }
};

} // namespace qshess
