#pragma once

#include <cmath>
#include <functional>
#include <sstream>

#include "schwarz/errors.hpp"
#include "schwarz/jet.hpp"

// Numeric Wirtinger derivative d/dz = (d/dx - i d/dy)/2 of a complex-valued
// plane field, via central finite differences along both axes. The field
// need not be analytic; this is how the defining route to the harmonic
// Schwarzian differentiates the pre-Schwarzian field.

namespace schwarz {

enum class StencilScheme {
    central2, // (f(x+h) - f(x-h)) / (2h), error O(h^2)
    central4  // (-f(x+2h) + 8f(x+h) - 8f(x-h) + f(x-2h)) / (12h), error O(h^4)
};

struct WirtingerStencil {
    double step = 1e-3;
    StencilScheme scheme = StencilScheme::central4;

    WirtingerStencil(double step_, StencilScheme scheme_) : step(step_), scheme(scheme_) {
        if (!(step > 0.0) || !(step < 1e-2)) {
            std::ostringstream os;
            os << "stencil step " << step_ << " outside (0, 1e-2)";
            throw ValidationError(os.str());
        }
    }

    static WirtingerStencil defaults() { return WirtingerStencil(1e-3, StencilScheme::central4); }

    // Number of steps the widest stencil point is away from the center.
    int reach() const { return scheme == StencilScheme::central4 ? 2 : 1; }
};

// Shrink the step, if needed, so every stencil point around z stays inside
// |z| < 1 - 1e-6. Throws StencilOutsideDomain when no positive step fits.
inline WirtingerStencil clamp_to_disk(WirtingerStencil s, complexd z) {
    const double margin = 1.0 - 1e-6;
    const double room = margin - std::abs(z);
    const double need = s.step * s.reach();
    if (room <= 0.0) {
        std::ostringstream os;
        os << "no room for a stencil at |z| = " << std::abs(z);
        throw StencilOutsideDomain(os.str());
    }
    if (need >= room) {
        s.step = 0.5 * room / s.reach();
    }
    return s;
}

namespace detail {

template <typename Field>
complexd central_derivative(const Field& f, complexd z, complexd dir, const WirtingerStencil& s) {
    const double h = s.step;
    if (s.scheme == StencilScheme::central2) {
        return (f(z + dir * h) - f(z - dir * h)) / (2.0 * h);
    }
    return (-f(z + dir * (2.0 * h)) + 8.0 * f(z + dir * h) - 8.0 * f(z - dir * h) +
            f(z - dir * (2.0 * h))) /
           (12.0 * h);
}

} // namespace detail

// d/dz of `field` at z. Every stencil point must satisfy |point| < 1.
inline complexd wirtinger_dz(const std::function<complexd(complexd)>& field, complexd z,
                             const WirtingerStencil& s) {
    const int reach = s.reach();
    for (int k = 1; k <= reach; ++k) {
        for (complexd dir : {complexd(1.0, 0.0), complexd(0.0, 1.0)}) {
            for (double sign : {1.0, -1.0}) {
                const complexd p = z + dir * (sign * k * s.step);
                if (std::abs(p) >= 1.0) {
                    std::ostringstream os;
                    os << "stencil point (" << p.real() << ", " << p.imag()
                       << ") has modulus >= 1";
                    throw StencilOutsideDomain(os.str());
                }
            }
        }
    }
    const complexd dx = detail::central_derivative(field, z, complexd(1.0, 0.0), s);
    const complexd dy = detail::central_derivative(field, z, complexd(0.0, 1.0), s);
    return 0.5 * (dx - complexd(0.0, 1.0) * dy);
}

} // namespace schwarz
