#pragma once

#include <complex>

namespace freelevy {

using cplx = std::complex<double>;

/// First-order jet over the complex numbers: a value together with its
/// derivative along the seed direction. Propagating a jet through a
/// holomorphic expression yields f(z) and f'(z)·dz with no step size and
/// no subtractive cancellation.
struct Jet {
    cplx v{};
    cplx d{};

    Jet() = default;
    constexpr Jet(cplx value, cplx deriv = {}) : v(value), d(deriv) {}
    constexpr Jet(double value) : v(value), d(0.0) {}

    static Jet variable(cplx z) { return Jet{z, 1.0}; }
    static Jet constant(cplx z) { return Jet{z, 0.0}; }

    Jet& operator+=(const Jet& o) { v += o.v; d += o.d; return *this; }
    Jet& operator-=(const Jet& o) { v -= o.v; d -= o.d; return *this; }
    Jet& operator*=(const Jet& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
    Jet& operator/=(const Jet& o) {
        const cplx inv = 1.0 / o.v;
        d = (d - v * inv * o.d) * inv;
        v *= inv;
        return *this;
    }
    Jet& operator*=(double s) { v *= s; d *= s; return *this; }
};

inline Jet operator-(const Jet& a) { return {-a.v, -a.d}; }
inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(Jet a, const Jet& b) { return a *= b; }
inline Jet operator/(Jet a, const Jet& b) { return a /= b; }
inline Jet operator+(Jet a, cplx b) { a.v += b; return a; }
inline Jet operator+(cplx b, Jet a) { a.v += b; return a; }
inline Jet operator-(Jet a, cplx b) { a.v -= b; return a; }
inline Jet operator-(cplx b, const Jet& a) { return {b - a.v, -a.d}; }
inline Jet operator*(Jet a, cplx b) { a.v *= b; a.d *= b; return a; }
inline Jet operator*(cplx b, Jet a) { a.v *= b; a.d *= b; return a; }
inline Jet operator/(Jet a, cplx b) { a.v /= b; a.d /= b; return a; }
inline Jet operator/(cplx b, const Jet& a) { return Jet{b} / a; }
inline Jet operator+(Jet a, double b) { return a + cplx(b); }
inline Jet operator+(double b, Jet a) { return a + cplx(b); }
inline Jet operator-(Jet a, double b) { return a - cplx(b); }
inline Jet operator-(double b, const Jet& a) { return cplx(b) - a; }
inline Jet operator*(Jet a, double b) { return a *= b; }
inline Jet operator*(double b, Jet a) { return a *= b; }
inline Jet operator/(Jet a, double b) { return a *= 1.0 / b; }
inline Jet operator/(double b, const Jet& a) { return cplx(b) / a; }

// Principal branches throughout, matching std::complex.
inline Jet sqrt(const Jet& a) {
    const cplx s = std::sqrt(a.v);
    return {s, a.d / (2.0 * s)};
}
inline Jet pow(const Jet& a, double p) {
    const cplx r = std::pow(a.v, p);
    return {r, p * r / a.v * a.d};
}
inline Jet exp(const Jet& a) {
    const cplx e = std::exp(a.v);
    return {e, e * a.d};
}
inline Jet log(const Jet& a) { return {std::log(a.v), a.d / a.v}; }

/// Componentwise conjugate; conj(f(conj z)) is holomorphic when f is.
inline Jet conj(const Jet& a) { return {std::conj(a.v), std::conj(a.d)}; }

inline cplx value_of(const Jet& a) { return a.v; }
inline cplx value_of(cplx a) { return a; }

} // namespace freelevy
