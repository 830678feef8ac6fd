#pragma once

#include <cmath>
#include <sstream>

#include "schwarz/harmonic.hpp"

// Canonical normalization of a harmonic map at a base point w: recenter by
// the disk automorphism phi_w, subtract the image of w, rescale, kill the
// dilatation at the origin with an affine map, and rotate so the dilatation
// derivative at the origin is a positive real. The result satisfies
//   h(0) = g(0) = 0,  h'(0) = 1,  omega(0) = 0,  omega'(0) > 0,
// and the accompanying pair-linear map M records the whole pipeline:
//   pair(result) = M applied to pair(f o phi_w).

namespace schwarz {

namespace tol {
// |h'(w)| and |omega-hat'(0)| floors for a usable base point.
inline constexpr double base_point_floor = 1e-10;
// Default tolerance when checking the normalization conditions.
inline constexpr double normalized_check = 1e-8;
} // namespace tol

struct NormalizationResult {
    HarmonicMap map;
    PairLinearMap pair_map;
    DiskAutomorphism recentering;
};

inline NormalizationResult normalize_at(const HarmonicMap& f, complexd w) {
    const DiskAutomorphism phi(w); // validates |w| < 1

    const Jet3 hj = eval_jet(f.analytic(), w);
    const Jet3 gj = eval_jet(f.co_analytic(), w);
    if (std::abs(hj.d1) < tol::base_point_floor) {
        std::ostringstream os;
        os << "|h'(w)| = " << std::abs(hj.d1) << " too small at base point (" << w.real() << ", "
           << w.imag() << ")";
        throw DegenerateBasePoint(os.str());
    }
    detail::check_jacobian(gj, hj, w);

    const HarmonicMap recentered = precompose(f, Expr::mobius(automorphism_as_mobius(phi)));

    // Subtract f(w) and divide by h'(w)(1 - |w|^2). Dividing the map by the
    // complex constant k divides the co-analytic part by conj(k).
    const complexd k = hj.d1 * (1.0 - std::norm(w));
    const PairLinearMap shift(1.0 / std::conj(k), 0.0, 0.0, 1.0 / k, -gj.v / std::conj(k),
                              -hj.v / k);

    // Align the co-analytic denominator with the analytic one.
    const PairLinearMap spin1 =
        PairLinearMap::from_rotation(RotationMu(hj.d1 / std::conj(hj.d1)));

    // Remove the dilatation value at the origin (which equals omega(w)).
    const complexd alpha0 = detail::dilatation_from_jets(gj, hj, w).w;
    const double one0 = 1.0 - std::norm(alpha0);
    const AffineMap kill(-std::conj(alpha0) / one0, 1.0 / one0, 0.0);
    const PairLinearMap stage3 =
        compose(PairLinearMap::from_affine(kill), compose(spin1, shift));

    const HarmonicMap partial = apply_pair_linear(stage3, recentered);

    const DilatationJet d0 = dilatation(partial, complexd(0.0, 0.0));
    if (std::abs(d0.w1) < tol::base_point_floor) {
        std::ostringstream os;
        os << "dilatation derivative modulus " << std::abs(d0.w1)
           << " vanishes after recentering at (" << w.real() << ", " << w.imag() << ")";
        throw DegenerateBasePoint(os.str());
    }

    // Rotate so the dilatation derivative at 0 becomes |d0.w1| > 0. The
    // rotation acts on the dilatation by omega -> conj(mu) omega, so mu
    // must carry the phase of omega'(0) itself.
    const RotationMu spin2(d0.w1 / std::abs(d0.w1));
    const PairLinearMap full = compose(PairLinearMap::from_rotation(spin2), stage3);
    HarmonicMap result = apply_pair_linear(PairLinearMap::from_rotation(spin2), partial);

    return NormalizationResult{std::move(result), full, phi};
}

// True when f satisfies the canonical conditions within tolerance:
// h(0) = g(0) = 0, h'(0) = 1, omega(0) = 0, omega'(0) real and positive.
inline bool is_normalized(const HarmonicMap& f, double tolerance = tol::normalized_check) {
    const Jet3 hj = eval_jet(f.analytic(), complexd(0.0, 0.0));
    const Jet3 gj = eval_jet(f.co_analytic(), complexd(0.0, 0.0));
    if (std::abs(hj.v) > tolerance) return false;
    if (std::abs(gj.v) > tolerance) return false;
    if (std::abs(hj.d1 - 1.0) > tolerance) return false;
    const DilatationJet d = detail::dilatation_from_jets(gj, hj, complexd(0.0, 0.0));
    if (std::abs(d.w) > tolerance) return false;
    if (std::abs(d.w1.imag()) > tolerance) return false;
    if (!(d.w1.real() > 0.0)) return false;
    return true;
}

} // namespace schwarz
