#pragma once

#include <cmath>
#include <complex>
#include <sstream>

#include "schwarz/errors.hpp"

// Third-order jets: a function value together with its first three complex
// derivatives at a point. All derivative propagation in the library (sums,
// products, quotients, compositions) goes through the combinators below, so
// there is exactly one place where the calculus lives.

namespace schwarz {

using complexd = std::complex<double>;

inline bool is_finite(complexd z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

namespace tol {
// Denominator floor for jet quotients.
inline constexpr double div_floor = 1e-14;
// Floor for derivatives that must not vanish (h', combination k').
inline constexpr double deriv_floor = 1e-12;
// Floor for the Jacobian in pre-/Schwarzian evaluations.
inline constexpr double jacobian_floor = 1e-12;
} // namespace tol

struct Jet3 {
    complexd v{};  // f(z)
    complexd d1{}; // f'(z)
    complexd d2{}; // f''(z)
    complexd d3{}; // f'''(z)

    Jet3() = default;

    Jet3(complexd v_, complexd d1_, complexd d2_, complexd d3_)
        : v(v_), d1(d1_), d2(d2_), d3(d3_) {
        if (!is_finite(v) || !is_finite(d1) || !is_finite(d2) || !is_finite(d3)) {
            throw NonFiniteValue("jet has a non-finite component");
        }
    }

    // Jet of the constant function c.
    static Jet3 constant(complexd c) { return Jet3(c, 0.0, 0.0, 0.0); }

    // Jet of the identity function at z.
    static Jet3 variable(complexd z) { return Jet3(z, 1.0, 0.0, 0.0); }
};

inline Jet3 operator+(const Jet3& a, const Jet3& b) {
    return Jet3(a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3);
}

inline Jet3 operator-(const Jet3& a, const Jet3& b) {
    return Jet3(a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3);
}

inline Jet3 operator*(complexd s, const Jet3& a) {
    return Jet3(s * a.v, s * a.d1, s * a.d2, s * a.d3);
}

inline Jet3 operator*(const Jet3& a, complexd s) { return s * a; }

// Leibniz rule through order three.
inline Jet3 operator*(const Jet3& a, const Jet3& b) {
    return Jet3(a.v * b.v,
                a.d1 * b.v + a.v * b.d1,
                a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
                a.d3 * b.v + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.v * b.d3);
}

// Quotient jet via the recurrence obtained from a = q * b.
inline Jet3 jet_div(const Jet3& a, const Jet3& b, double floor = tol::div_floor) {
    if (std::abs(b.v) < floor) {
        std::ostringstream os;
        os << "jet quotient denominator has modulus " << std::abs(b.v)
           << " below floor " << floor;
        throw DivisionByZeroJet(os.str());
    }
    const complexd q0 = a.v / b.v;
    const complexd q1 = (a.d1 - q0 * b.d1) / b.v;
    const complexd q2 = (a.d2 - 2.0 * q1 * b.d1 - q0 * b.d2) / b.v;
    const complexd q3 = (a.d3 - 3.0 * q2 * b.d1 - 3.0 * q1 * b.d2 - q0 * b.d3) / b.v;
    return Jet3(q0, q1, q2, q3);
}

// Faa di Bruno through order three. `outer` must be the jet of the outer
// function taken at inner.v.
inline Jet3 jet_compose(const Jet3& outer, const Jet3& inner) {
    const complexd i1 = inner.d1, i2 = inner.d2, i3 = inner.d3;
    return Jet3(outer.v,
                outer.d1 * i1,
                outer.d2 * i1 * i1 + outer.d1 * i2,
                outer.d3 * i1 * i1 * i1 + 3.0 * outer.d2 * i1 * i2 + outer.d1 * i3);
}

} // namespace schwarz
