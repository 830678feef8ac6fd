#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "schwarz/errors.hpp"
#include "schwarz/expr.hpp"
#include "schwarz/grid.hpp"
#include "schwarz/jet.hpp"
#include "schwarz/wirtinger.hpp"

// Planar harmonic mappings f = conj(g) + h with g, h analytic on the disk,
// their dilatation, Jacobian, pre-Schwarzian and Schwarzian derivatives,
// and the transformations that act on them: affine post-maps applied to the
// output values, anti-analytic rotations, conjugation, precomposition, and
// general linear actions on the (g, h) pair.
//
// Naming note: the affine map A(w) = a conj(w) + b w + c acts on output
// values, i.e. the transformed map is A o f, so the operation is called
// post_affine even though the pair action reads like a recombination of
// (g, h).

namespace schwarz {

namespace tol {
// |J| floor at grid points for a map to count as locally univalent.
inline constexpr double univalence_floor = 1e-10;
// ||a| - |b|| floor for an admissible affine post-map.
inline constexpr double affine_gap = 1e-10;
// Determinant floor for pair-linear maps.
inline constexpr double pair_det_floor = 1e-12;
// Residual tolerance for factoring a pair-linear map into affine/rotation.
inline constexpr double factor_residual = 1e-9;
} // namespace tol

class HarmonicMap {
public:
    // The pair is validated on the default grid: |J| >= 1e-10 everywhere
    // and one fixed sign (orientation is a derived property, not stored).
    HarmonicMap(Expr g, Expr h) : g_(std::move(g)), h_(std::move(h)) {
        bool first = true;
        bool positive = false;
        for (complexd p : default_grid()) {
            const double jac = std::norm(h_.jet_at(p).d1) - std::norm(g_.jet_at(p).d1);
            if (std::abs(jac) < tol::univalence_floor) {
                std::ostringstream os;
                os << "map is not locally univalent: |J| = " << std::abs(jac)
                   << " at grid point (" << p.real() << ", " << p.imag() << ")";
                throw ValidationError(os.str());
            }
            if (first) {
                positive = jac > 0.0;
                first = false;
            } else if ((jac > 0.0) != positive) {
                std::ostringstream os;
                os << "Jacobian changes sign on the grid near (" << p.real() << ", " << p.imag()
                   << ")";
                throw ValidationError(os.str());
            }
        }
    }

    // Build from polynomial h and polynomial dilatation omega: g is the
    // exact polynomial antiderivative of omega * h' with g(0) = 0.
    static HarmonicMap from_h_omega(const std::vector<complexd>& h_coeffs,
                                    const std::vector<complexd>& omega_coeffs) {
        std::vector<complexd> hp;
        for (std::size_t k = 1; k < h_coeffs.size(); ++k) {
            hp.push_back(static_cast<double>(k) * h_coeffs[k]);
        }
        std::vector<complexd> gp(hp.size() + omega_coeffs.size(), complexd(0.0, 0.0));
        if (!hp.empty() && !omega_coeffs.empty()) {
            gp.assign(hp.size() + omega_coeffs.size() - 1, complexd(0.0, 0.0));
            for (std::size_t i = 0; i < omega_coeffs.size(); ++i) {
                for (std::size_t j = 0; j < hp.size(); ++j) {
                    gp[i + j] += omega_coeffs[i] * hp[j];
                }
            }
        } else {
            gp.clear();
        }
        std::vector<complexd> g(gp.size() + 1, complexd(0.0, 0.0));
        for (std::size_t k = 0; k < gp.size(); ++k) {
            g[k + 1] = gp[k] / static_cast<double>(k + 1);
        }
        return HarmonicMap(Expr::polynomial(std::move(g)), Expr::polynomial(h_coeffs));
    }

    const Expr& co_analytic() const { return g_; } // g: f = conj(g) + h
    const Expr& analytic() const { return h_; }    // h

    complexd value(complexd z) const { return std::conj(eval(g_, z)) + eval(h_, z); }

    bool orientation_preserving() const {
        const complexd p = default_grid().front();
        return std::norm(h_.jet_at(p).d1) - std::norm(g_.jet_at(p).d1) > 0.0;
    }

private:
    Expr g_, h_;
};

// omega = g'/h' with two derivatives.
struct DilatationJet {
    complexd w{};  // omega(z)
    complexd w1{}; // omega'(z)
    complexd w2{}; // omega''(z)
};

namespace detail {

inline Jet3 derivative_shift(const Jet3& j) { return Jet3(j.d1, j.d2, j.d3, 0.0); }

// Quotient jet of g'/h' given the 3-jets of g and h. The top component of
// the shifted jets is unknown, so only value and two derivatives of the
// quotient are meaningful.
inline DilatationJet dilatation_from_jets(const Jet3& gj, const Jet3& hj, complexd z) {
    if (std::abs(hj.d1) < tol::deriv_floor) {
        std::ostringstream os;
        os << "analytic part has |h'| = " << std::abs(hj.d1) << " at (" << z.real() << ", "
           << z.imag() << ")";
        throw CriticalPoint(os.str());
    }
    const Jet3 q = jet_div(derivative_shift(gj), derivative_shift(hj));
    return DilatationJet{q.v, q.d1, q.d2};
}

// Jets used for the closed Schwarzian routes. The formulas require the
// analytic part to have a non-vanishing derivative; when it vanishes
// identically (the stored pair represents the conjugate of an analytic
// map) the same quantities are evaluated on the swapped pair, which
// represents the conjugate mapping and has the same pre-/Schwarzian.
struct RoutePair {
    Jet3 g, h;
};

inline RoutePair route_jets(const HarmonicMap& f, complexd z) {
    const Jet3 gj = eval_jet(f.co_analytic(), z);
    const Jet3 hj = eval_jet(f.analytic(), z);
    if (std::abs(hj.d1) >= tol::deriv_floor) return RoutePair{gj, hj};
    if (std::abs(gj.d1) >= tol::deriv_floor) return RoutePair{hj, gj};
    std::ostringstream os;
    os << "both |g'| and |h'| below floor at (" << z.real() << ", " << z.imag() << ")";
    throw CriticalPoint(os.str());
}

inline void check_jacobian(const Jet3& gj, const Jet3& hj, complexd z) {
    const double jac = std::norm(hj.d1) - std::norm(gj.d1);
    if (std::abs(jac) < tol::jacobian_floor) {
        std::ostringstream os;
        os << "|J| = " << std::abs(jac) << " below floor at (" << z.real() << ", " << z.imag()
           << ")";
        throw DegenerateJacobian(os.str());
    }
}

} // namespace detail

inline DilatationJet dilatation(const HarmonicMap& f, complexd z) {
    return detail::dilatation_from_jets(eval_jet(f.co_analytic(), z), eval_jet(f.analytic(), z),
                                        z);
}

// J_f = |h'|^2 - |g'|^2; positive where f preserves orientation.
inline double jacobian(const HarmonicMap& f, complexd z) {
    return std::norm(eval_jet(f.analytic(), z).d1) - std::norm(eval_jet(f.co_analytic(), z).d1);
}

// P_H(f) = h''/h' - conj(omega) omega' / (1 - |omega|^2), the z-derivative
// of log J_f.
inline complexd pre_schwarzian_h(const HarmonicMap& f, complexd z) {
    const auto [gj, hj] = detail::route_jets(f, z);
    detail::check_jacobian(gj, hj, z);
    const DilatationJet w = detail::dilatation_from_jets(gj, hj, z);
    const double one = 1.0 - std::norm(w.w);
    return hj.d2 / hj.d1 - std::conj(w.w) * w.w1 / one;
}

// Same quantity through d_z J / J = (h'' conj(h') - g'' conj(g')) / J_f;
// algebraically identical to pre_schwarzian_h and insensitive to the pair
// order, kept as an independent evaluation route.
inline complexd pre_schwarzian_h_via_jacobian(const HarmonicMap& f, complexd z) {
    const Jet3 gj = eval_jet(f.co_analytic(), z);
    const Jet3 hj = eval_jet(f.analytic(), z);
    detail::check_jacobian(gj, hj, z);
    const double jac = std::norm(hj.d1) - std::norm(gj.d1);
    return (hj.d2 * std::conj(hj.d1) - gj.d2 * std::conj(gj.d1)) / jac;
}

// Closed form of the harmonic Schwarzian:
//   S_H(f) = S(h) + conj(omega)/(1-|omega|^2) ((h''/h') omega' - omega'')
//            - (3/2) (omega' conj(omega)/(1-|omega|^2))^2.
inline complexd schwarzian_h_closed(const HarmonicMap& f, complexd z) {
    const auto [gj, hj] = detail::route_jets(f, z);
    detail::check_jacobian(gj, hj, z);
    const DilatationJet w = detail::dilatation_from_jets(gj, hj, z);
    const double one = 1.0 - std::norm(w.w);
    const complexd p = hj.d2 / hj.d1;
    const complexd sh = hj.d3 / hj.d1 - 1.5 * p * p;
    const complexd B = std::conj(w.w) / one;
    const complexd t = w.w1 * B;
    return sh + B * (p * w.w1 - w.w2) - 1.5 * t * t;
}

// Pointwise route: S_H(f)(z0) equals the classical Schwarzian of the
// analytic combination h - conj(omega(z0)) g evaluated at z0.
inline complexd schwarzian_h_pointwise(const HarmonicMap& f, complexd z0) {
    const auto [gj, hj] = detail::route_jets(f, z0);
    detail::check_jacobian(gj, hj, z0);
    const complexd c = std::conj(jet_div(detail::derivative_shift(gj),
                                         detail::derivative_shift(hj))
                                     .v);
    const Jet3 k = hj - c * gj;
    if (std::abs(k.d1) < tol::deriv_floor) {
        std::ostringstream os;
        os << "combination derivative below floor at (" << z0.real() << ", " << z0.imag() << ")";
        throw CriticalPoint(os.str());
    }
    const complexd p = k.d2 / k.d1;
    return k.d3 / k.d1 - 1.5 * p * p;
}

// Defining route: S_H = d_z P_H - P_H^2 / 2 with the Wirtinger derivative
// taken numerically on the pre-Schwarzian field. The stencil is shrunk as
// needed to keep all sample points inside |z| < 1 - 1e-6.
inline complexd schwarzian_h_definition(const HarmonicMap& f, complexd z,
                                        WirtingerStencil stencil = WirtingerStencil::defaults()) {
    const WirtingerStencil clamped = clamp_to_disk(stencil, z);
    const std::function<complexd(complexd)> field = [&f](complexd p) {
        return pre_schwarzian_h(f, p);
    };
    const complexd dz = wirtinger_dz(field, z, clamped);
    const complexd p = pre_schwarzian_h(f, z);
    return dz - 0.5 * p * p;
}

// A(w) = a conj(w) + b w + c; admissible when |a| != |b|, and orientation
// preserving on composition exactly when |b| > |a|.
struct AffineMap {
    complexd a{}, b{}, c{};

    AffineMap(complexd a_, complexd b_, complexd c_) : a(a_), b(b_), c(c_) {
        if (std::abs(std::abs(a) - std::abs(b)) < tol::affine_gap) {
            std::ostringstream os;
            os << "affine map with ||a| - |b|| = " << std::abs(std::abs(a) - std::abs(b))
               << " is degenerate";
            throw ValidationError(os.str());
        }
    }

    complexd operator()(complexd w) const { return a * std::conj(w) + b * w + c; }
};

// R_mu(f) = mu conj(g) + h for |mu| = 1; mu is renormalized to exact unit
// modulus at construction.
struct RotationMu {
    complexd mu{1.0, 0.0};

    RotationMu() = default;

    explicit RotationMu(complexd m) {
        const double r = std::abs(m);
        if (r < 1e-12) throw ValidationError("rotation parameter must be nonzero");
        mu = m / r;
    }
};

// (g, h) -> (m11 g + m12 h + t1, m21 g + m22 h + t2).
struct PairLinearMap {
    complexd m11{1.0}, m12{}, m21{}, m22{1.0}, t1{}, t2{};

    PairLinearMap(complexd m11_, complexd m12_, complexd m21_, complexd m22_, complexd t1_,
                  complexd t2_)
        : m11(m11_), m12(m12_), m21(m21_), m22(m22_), t1(t1_), t2(t2_) {
        const complexd det = m11 * m22 - m12 * m21;
        if (std::abs(det) < tol::pair_det_floor) {
            std::ostringstream os;
            os << "pair-linear map determinant modulus " << std::abs(det) << " below floor";
            throw ValidationError(os.str());
        }
    }

    static PairLinearMap identity() { return PairLinearMap(1.0, 0.0, 0.0, 1.0, 0.0, 0.0); }

    // Pair action of A o f: G = conj(b) g + conj(a) h, H = a g + b h + c.
    static PairLinearMap from_affine(const AffineMap& A) {
        return PairLinearMap(std::conj(A.b), std::conj(A.a), A.a, A.b, 0.0, A.c);
    }

    // Pair action of R_mu: G = conj(mu) g, H = h.
    static PairLinearMap from_rotation(const RotationMu& R) {
        return PairLinearMap(std::conj(R.mu), 0.0, 0.0, 1.0, 0.0, 0.0);
    }
};

inline PairLinearMap compose(const PairLinearMap& after, const PairLinearMap& first) {
    return PairLinearMap(after.m11 * first.m11 + after.m12 * first.m21,
                         after.m11 * first.m12 + after.m12 * first.m22,
                         after.m21 * first.m11 + after.m22 * first.m21,
                         after.m21 * first.m12 + after.m22 * first.m22,
                         after.m11 * first.t1 + after.m12 * first.t2 + after.t1,
                         after.m21 * first.t1 + after.m22 * first.t2 + after.t2);
}

inline PairLinearMap inverse(const PairLinearMap& m) {
    const complexd det = m.m11 * m.m22 - m.m12 * m.m21;
    const complexd i11 = m.m22 / det, i12 = -m.m12 / det;
    const complexd i21 = -m.m21 / det, i22 = m.m11 / det;
    return PairLinearMap(i11, i12, i21, i22, -(i11 * m.t1 + i12 * m.t2),
                         -(i21 * m.t1 + i22 * m.t2));
}

namespace detail {

// c1*e1 + c2*e2 + t with exact-zero terms dropped and scaling by exactly
// 1.0 elided, to keep derived trees small.
inline Expr linear_combination(complexd c1, const Expr& e1, complexd c2, const Expr& e2,
                               complexd t) {
    std::optional<Expr> acc;
    auto push = [&acc](complexd c, const Expr& e) {
        if (c == complexd(0.0, 0.0)) return;
        Expr term = (c == complexd(1.0, 0.0)) ? e : scale(c, e);
        acc = acc ? add(*acc, term) : term;
    };
    push(c1, e1);
    push(c2, e2);
    if (!acc) return Expr::constant(t);
    if (t != complexd(0.0, 0.0)) return add(*acc, Expr::constant(t));
    return *acc;
}

} // namespace detail

inline HarmonicMap apply_pair_linear(const PairLinearMap& m, const HarmonicMap& f) {
    const Expr& g = f.co_analytic();
    const Expr& h = f.analytic();
    return HarmonicMap(detail::linear_combination(m.m11, g, m.m12, h, m.t1),
                       detail::linear_combination(m.m21, g, m.m22, h, m.t2));
}

// A o f as a harmonic map. With A = (1, 0, 0) this is the conjugate map
// (pair swap).
inline HarmonicMap post_affine(const AffineMap& A, const HarmonicMap& f) {
    return apply_pair_linear(PairLinearMap::from_affine(A), f);
}

inline HarmonicMap rotate_antianalytic(const RotationMu& R, const HarmonicMap& f) {
    return apply_pair_linear(PairLinearMap::from_rotation(R), f);
}

inline HarmonicMap conjugate(const HarmonicMap& f) {
    return HarmonicMap(f.analytic(), f.co_analytic());
}

// f o phi for an analytic phi mapping the disk into itself; checked on the
// grid together with local univalence of phi.
inline HarmonicMap precompose(const HarmonicMap& f, const Expr& phi) {
    for (complexd p : default_grid()) {
        const Jet3 j = eval_jet(phi, p);
        if (!(std::abs(j.v) < 1.0)) {
            std::ostringstream os;
            os << "precomposition leaves the disk: |phi| = " << std::abs(j.v) << " at ("
               << p.real() << ", " << p.imag() << ")";
            throw RangeViolation(os.str());
        }
        if (std::abs(j.d1) < tol::deriv_floor) {
            std::ostringstream os;
            os << "precomposition argument has |phi'| = " << std::abs(j.d1) << " at ("
               << p.real() << ", " << p.imag() << ")";
            throw RangeViolation(os.str());
        }
    }
    return HarmonicMap(compose(f.co_analytic(), phi), compose(f.analytic(), phi));
}

struct AffineRotationFactors {
    AffineMap affine;
    RotationMu rotation;
    double residual = 0.0;
};

// Try to write M as the pair action of A o R_mu, i.e.
//   m11 = conj(b) conj(mu), m12 = conj(a), m21 = a conj(mu), m22 = b,
//   t1 = 0, t2 = c.
// Returns the factors with the reconstruction residual, or nothing if M is
// not of that shape within 1e-9.
inline std::optional<AffineRotationFactors> factor_pair_linear(const PairLinearMap& M) {
    if (std::abs(M.t1) > tol::factor_residual) return std::nullopt;
    complexd a, mu_raw;
    const complexd b = M.m22;
    if (std::abs(M.m12) >= 1e-12) {
        a = std::conj(M.m12);
        mu_raw = std::conj(M.m21 / a);
    } else {
        a = 0.0;
        if (std::abs(M.m22) < 1e-12) return std::nullopt;
        mu_raw = std::conj(M.m11 / std::conj(M.m22));
    }
    if (std::abs(std::abs(mu_raw) - 1.0) > tol::factor_residual) return std::nullopt;
    if (std::abs(std::abs(a) - std::abs(b)) < tol::affine_gap) return std::nullopt;

    const RotationMu R(mu_raw);
    const AffineMap A(a, b, M.t2);
    const PairLinearMap back = compose(PairLinearMap::from_affine(A),
                                       PairLinearMap::from_rotation(R));
    double res = std::abs(std::abs(mu_raw) - 1.0);
    res = std::max(res, std::abs(M.m11 - back.m11));
    res = std::max(res, std::abs(M.m12 - back.m12));
    res = std::max(res, std::abs(M.m21 - back.m21));
    res = std::max(res, std::abs(M.m22 - back.m22));
    res = std::max(res, std::abs(M.t1 - back.t1));
    res = std::max(res, std::abs(M.t2 - back.t2));
    if (res > tol::factor_residual) return std::nullopt;
    return AffineRotationFactors{A, R, res};
}

} // namespace schwarz
