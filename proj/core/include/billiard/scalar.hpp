#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace billiard {

/// Thrown on violated preconditions (degenerate input, bad polygon, ...).
struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when the float backend loses the trajectory.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two scalar backends sit behind one comparison contract:
//  - Rat: exact rationals (GMP), decidable comparisons, no tolerance.
//  - double: IEEE doubles, equality means |a-b| <= tol(), one global knob.
using Rat = mpq_class;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rat> {
    static constexpr bool exact = true;

    static Rat from_int(long v) { return Rat(v); }
    static Rat from_fraction(long num, long den) {
        if (den == 0) throw GeometryError("fraction with zero denominator");
        Rat q(num, den);
        q.canonicalize();
        return q;
    }
    static bool eq(const Rat& a, const Rat& b) { return a == b; }
    // sign in {-1,0,1}
    static int sign(const Rat& a) { return sgn(a); }
    static double to_double(const Rat& a) { return a.get_d(); }
    static Rat abs(const Rat& a) { return ::abs(a); }
    static std::string str(const Rat& a) { return a.get_str(); }
};

namespace detail {
inline double& float_tolerance() {
    static double tol = 1e-9;  // table units
    return tol;
}
}  // namespace detail

/// Global tolerance of the float backend (default 1e-9 table units).
inline double float_tolerance() { return detail::float_tolerance(); }
inline void set_float_tolerance(double tol) {
    if (!(tol > 0)) throw GeometryError("tolerance must be positive");
    detail::float_tolerance() = tol;
}

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;

    static double from_int(long v) { return static_cast<double>(v); }
    static double from_fraction(long num, long den) {
        if (den == 0) throw GeometryError("fraction with zero denominator");
        return static_cast<double>(num) / static_cast<double>(den);
    }
    static bool eq(double a, double b) { return std::fabs(a - b) <= float_tolerance(); }
    static int sign(double a) {
        if (std::fabs(a) <= float_tolerance()) return 0;
        return a > 0 ? 1 : -1;
    }
    static double to_double(double a) { return a; }
    static double abs(double a) { return std::fabs(a); }
    static std::string str(double a) { return std::to_string(a); }
};

template <class S>
double to_double(const S& a) {
    return ScalarTraits<S>::to_double(a);
}

/// Exact small-integer fraction in lowest terms; used for angle certificates
/// and basis-region centers independently of the active backend.
struct Fraction {
    long num = 0;
    long den = 1;

    Fraction() = default;
    Fraction(long n, long d) : num(n), den(d) {
        if (d == 0) throw GeometryError("fraction with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long g = std::abs(gcd_(num, den));
        if (g > 1) { num /= g; den /= g; }
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    Rat rat() const { return ScalarTraits<Rat>::from_fraction(num, den); }
    bool operator==(const Fraction&) const = default;

  private:
    static long gcd_(long a, long b) {
        while (b) { long t = a % b; a = b; b = t; }
        return a < 0 ? -a : a;
    }
};

}  // namespace billiard
