#pragma once

#include <cmath>
#include <complex>
#include <sstream>

#include "schwarz/errors.hpp"
#include "schwarz/jet.hpp"

// Mobius transformations T(z) = (az + b) / (cz + d) and the disk
// automorphisms phi_w(z) = (w + z) / (1 + conj(w) z) used for recentering.

namespace schwarz {

namespace tol {
inline constexpr double mobius_det_floor = 1e-12;
} // namespace tol

class Mobius {
public:
    // Coefficients are rescaled at construction so that ad - bc = 1; the
    // transformation itself is unchanged. Rejects |ad - bc| < 1e-12.
    Mobius(complexd a, complexd b, complexd c, complexd d) : a_(a), b_(b), c_(c), d_(d) {
        const complexd det = a_ * d_ - b_ * c_;
        if (std::abs(det) < tol::mobius_det_floor) {
            std::ostringstream os;
            os << "mobius determinant modulus " << std::abs(det) << " below floor";
            throw ValidationError(os.str());
        }
        const complexd s = 1.0 / std::sqrt(det);
        a_ *= s;
        b_ *= s;
        c_ *= s;
        d_ *= s;
    }

    static Mobius identity() { return Mobius(1.0, 0.0, 0.0, 1.0); }

    complexd a() const { return a_; }
    complexd b() const { return b_; }
    complexd c() const { return c_; }
    complexd d() const { return d_; }

    complexd operator()(complexd w) const {
        const complexd q = c_ * w + d_;
        if (std::abs(q) < tol::div_floor) {
            std::ostringstream os;
            os << "mobius evaluated at pole: |cz + d| = " << std::abs(q);
            throw PoleHit(os.str());
        }
        return (a_ * w + b_) / q;
    }

    // 3-jet at z. With det = ad - bc: T' = det/q^2, T'' = -2c det/q^3,
    // T''' = 6c^2 det/q^4 where q = cz + d.
    Jet3 jet(complexd z) const {
        const complexd q = c_ * z + d_;
        if (std::abs(q) < tol::div_floor) {
            std::ostringstream os;
            os << "mobius jet at pole: |cz + d| = " << std::abs(q);
            throw DivisionByZeroJet(os.str());
        }
        const complexd det = a_ * d_ - b_ * c_;
        const complexd q2 = q * q;
        return Jet3((a_ * z + b_) / q, det / q2, -2.0 * c_ * det / (q2 * q),
                    6.0 * c_ * c_ * det / (q2 * q2));
    }

private:
    complexd a_, b_, c_, d_;
};

inline Mobius compose(const Mobius& s, const Mobius& t) {
    // Matrix product: (s o t)(z) = s(t(z)).
    return Mobius(s.a() * t.a() + s.b() * t.c(), s.a() * t.b() + s.b() * t.d(),
                  s.c() * t.a() + s.d() * t.c(), s.c() * t.b() + s.d() * t.d());
}

inline Mobius inverse(const Mobius& t) {
    return Mobius(t.d(), -t.b(), -t.c(), t.a());
}

// phi_w(z) = (w + z) / (1 + conj(w) z), the automorphism sending 0 to w.
struct DiskAutomorphism {
    complexd w{};

    DiskAutomorphism() = default;

    explicit DiskAutomorphism(complexd w_) : w(w_) {
        if (!(std::abs(w) < 1.0)) {
            std::ostringstream os;
            os << "automorphism parameter |w| = " << std::abs(w) << " not inside the disk";
            throw PointOutsideDisk(os.str());
        }
    }
};

inline Mobius automorphism_as_mobius(const DiskAutomorphism& phi) {
    return Mobius(1.0, phi.w, std::conj(phi.w), 1.0);
}

} // namespace schwarz
