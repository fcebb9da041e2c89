#ifndef LOEWNER_COMPLEX_UTIL_HPP
#define LOEWNER_COMPLEX_UTIL_HPP

#include <cmath>
#include <complex>
#include <limits>

#include "loewner/errors.hpp"

namespace loewner {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Point of the Riemann sphere: a finite complex number or the point at
// infinity, carried as an explicit flag rather than an overflowed double.
struct ComplexPoint {
    Complex value{0.0, 0.0};
    bool at_infinity = false;

    ComplexPoint() = default;
    ComplexPoint(double re, double im) : value(re, im) {}
    ComplexPoint(const Complex& z) : value(z) {} // NOLINT: implicit by design

    static ComplexPoint infinity() {
        ComplexPoint p;
        p.at_infinity = true;
        return p;
    }

    bool finite() const { return !at_infinity && is_finite(value); }
};

// Principal square root: branch cut on (-inf, 0], maps the upper half-plane
// into the first quadrant (the standard Loewner convention).
inline Complex sqrt_principal(const Complex& z) { return std::sqrt(z); }

// Square root with branch cut on [0, +inf): maps C \ [0, inf) onto the upper
// half-plane. On the cut the signed zero of Im z selects the side, so values
// computed as limits from H come out on the correct sheet.
inline Complex sqrt_upper(const Complex& z) {
    double r = std::abs(z);
    if (r == 0.0) return {0.0, 0.0};
    double theta = std::atan2(z.imag(), z.real()); // [-pi, pi]
    if (theta < 0.0 || std::signbit(theta)) theta += 2.0 * kPi;
    double s = std::sqrt(r);
    return {s * std::cos(0.5 * theta), s * std::sin(0.5 * theta)};
}

inline double sq(double x) { return x * x; }

} // namespace loewner

#endif
