#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "schwarz/grid.hpp"
#include "schwarz/harmonic.hpp"
#include "schwarz/normalize.hpp"

// Decision procedure for Schwarzian equivalence of two harmonic maps, with
// explicit witness reconstruction, plus verification suites for the
// structural identities that equal-Schwarzian pairs must satisfy.

namespace schwarz {

namespace tol {
// Maximum allowed pointwise deviation of the two Schwarzian fields.
inline constexpr double field_compare = 1e-7;
// Residual allowed when a reconstructed witness is replayed on the grid.
inline constexpr double witness_residual = 1e-8;
// A dilatation is declared constant when it deviates less than this.
inline constexpr double constant_dilatation = 1e-9;
// |omega'(w)| floor for a base point used in witness reconstruction.
inline constexpr double omega_deriv_floor = 1e-8;
// Default residual tolerance for the identity suites.
inline constexpr double identity_residual = 1e-7;
// Residual tolerance for the series-limit checks (finite extrapolation).
inline constexpr double limit_residual = 1e-6;
} // namespace tol

struct EqualityOptions {
    GridSpec grid = GridSpec::defaults();
    double field_tol = tol::field_compare;
    double witness_tol = tol::witness_residual;
    double constant_tol = tol::constant_dilatation;
    double omega_deriv_floor = tol::omega_deriv_floor;
};

struct FieldDiagnostics {
    double max_deviation = 0.0;
    complexd worst_point{0.0, 0.0};
    std::string note;
};

struct NotEqual {
    FieldDiagnostics diagnostics;
};

// Witness for maps with non-constant dilatation: f2 = A(rotate_mu(f1)) where
// the affine map A and the rotation mu were extracted from the connecting
// pair-linear map found by normalizing both maps at the same base point.
struct EqualNonConstant {
    AffineMap affine;
    RotationMu rotation;
    complexd base_point{0.0, 0.0};
    double residual = 0.0;
    FieldDiagnostics diagnostics;
};

// Witness for maps with constant dilatation: each f_i decomposes as
// f_i = alpha_i conj(h_i) + h_i + gamma_i and the analytic parts are related
// by the Mobius map T with h2 = T o h1.
struct EqualConstantFamily {
    Mobius connector{1.0, 0.0, 0.0, 1.0};
    complexd alpha1{0.0, 0.0};
    complexd alpha2{0.0, 0.0};
    complexd gamma1{0.0, 0.0};
    complexd gamma2{0.0, 0.0};
    double residual = 0.0;
    FieldDiagnostics diagnostics;
};

using ConnectionResult = std::variant<NotEqual, EqualNonConstant, EqualConstantFamily>;

inline bool is_equal_verdict(const ConnectionResult& r) {
    return !std::holds_alternative<NotEqual>(r);
}

struct DilatationClass {
    bool constant = false;
    complexd omega0{0.0, 0.0};  // value at the origin
    double max_deviation = 0.0; // largest |omega(z) - omega0| over the grid
};

inline DilatationClass classify_dilatation(const HarmonicMap& f,
                                           const GridSpec& grid = GridSpec::defaults(),
                                           double tolerance = tol::constant_dilatation) {
    DilatationClass out;
    out.omega0 = dilatation(f, complexd(0.0, 0.0)).w;
    for (const complexd& z : grid.points()) {
        out.max_deviation = std::max(out.max_deviation, std::abs(dilatation(f, z).w - out.omega0));
    }
    out.constant = out.max_deviation <= tolerance;
    return out;
}

namespace detail {

inline FieldDiagnostics compare_schwarzian_fields(const HarmonicMap& f1, const HarmonicMap& f2,
                                                  const GridSpec& grid) {
    FieldDiagnostics diag;
    diag.worst_point = grid.points().front();
    for (const complexd& z : grid.points()) {
        const double d = std::abs(schwarzian_h_closed(f1, z) - schwarzian_h_closed(f2, z));
        if (d > diag.max_deviation) {
            diag.max_deviation = d;
            diag.worst_point = z;
        }
    }
    return diag;
}

inline ConnectionResult connect_constant(const HarmonicMap& f1, const HarmonicMap& f2,
                                         const DilatationClass& c1, const DilatationClass& c2,
                                         FieldDiagnostics field_diag,
                                         const EqualityOptions& opts) {
    Mobius connector(1.0, 0.0, 0.0, 1.0);
    try {
        connector = recover_mobius(f2.analytic(), f1.analytic());
    } catch (const NotEquivalent& e) {
        field_diag.note = std::string("analytic parts are not Mobius-related: ") + e.what();
        return NotEqual{field_diag};
    }

    EqualConstantFamily out;
    out.connector = connector;
    out.alpha1 = std::conj(c1.omega0);
    out.alpha2 = std::conj(c2.omega0);
    const complexd z0(0.0, 0.0);
    out.gamma1 = std::conj(eval(f1.co_analytic(), z0) - c1.omega0 * eval(f1.analytic(), z0));
    out.gamma2 = std::conj(eval(f2.co_analytic(), z0) - c2.omega0 * eval(f2.analytic(), z0));

    double residual = 0.0;
    complexd worst = opts.grid.points().front();
    for (const complexd& z : opts.grid.points()) {
        const complexd h1 = eval(f1.analytic(), z);
        const complexd h2 = eval(f2.analytic(), z);
        const double r_conn = std::abs(h2 - connector(h1));
        const double r_dec1 =
            std::abs(f1.value(z) - (out.alpha1 * std::conj(h1) + h1 + out.gamma1));
        const double r_dec2 =
            std::abs(f2.value(z) - (out.alpha2 * std::conj(h2) + h2 + out.gamma2));
        const double r = std::max({r_conn, r_dec1, r_dec2});
        if (r > residual) {
            residual = r;
            worst = z;
        }
    }
    if (residual > opts.witness_tol) {
        field_diag.note = "constant-family witness residual too large";
        field_diag.max_deviation = residual;
        field_diag.worst_point = worst;
        return NotEqual{field_diag};
    }
    out.residual = residual;
    out.diagnostics = std::move(field_diag);
    return out;
}

inline ConnectionResult connect_nonconstant(const HarmonicMap& f1, const HarmonicMap& f2,
                                            FieldDiagnostics field_diag,
                                            const EqualityOptions& opts) {
    // Deterministic base-point scan: grid points come sorted by radius then
    // angle, so the first usable point is the smallest-radius one.
    std::optional<complexd> base;
    for (const complexd& z : opts.grid.points()) {
        const bool usable = std::abs(dilatation(f1, z).w1) >= opts.omega_deriv_floor &&
                            std::abs(dilatation(f2, z).w1) >= opts.omega_deriv_floor &&
                            std::abs(eval_jet(f1.analytic(), z).d1) >= tol::base_point_floor &&
                            std::abs(eval_jet(f2.analytic(), z).d1) >= tol::base_point_floor;
        if (usable) {
            base = z;
            break;
        }
    }
    if (!base) {
        throw DegenerateBasePoint(
            "no grid point has a usable dilatation derivative for witness reconstruction");
    }

    const NormalizationResult n1 = normalize_at(f1, *base);
    const NormalizationResult n2 = normalize_at(f2, *base);

    double agree = 0.0;
    complexd agree_worst = opts.grid.points().front();
    for (const complexd& z : opts.grid.points()) {
        const double d = std::abs(n1.map.value(z) - n2.map.value(z));
        if (d > agree) {
            agree = d;
            agree_worst = z;
        }
    }
    if (agree > opts.witness_tol) {
        field_diag.note = "normalized maps at the shared base point differ";
        field_diag.max_deviation = agree;
        field_diag.worst_point = agree_worst;
        return NotEqual{field_diag};
    }

    // pair(n1.map) = M1 pair(f1 o phi), pair(n2.map) = M2 pair(f2 o phi) and
    // the normalized maps coincide, so pair(f2 o phi) = M2^{-1} M1 pair(f1 o phi);
    // the same connector links f1 and f2 before recentering.
    PairLinearMap connect = compose(inverse(n2.pair_map), n1.pair_map);
    // (g, h) and (g + k, h - conj(k)) represent the same harmonic map, so a
    // g-row translation can be moved into the h row before factoring.
    connect.t2 += std::conj(connect.t1);
    connect.t1 = complexd(0.0, 0.0);
    const std::optional<AffineRotationFactors> factors = factor_pair_linear(connect);
    if (!factors) {
        field_diag.note = "connecting pair map does not factor as affine x rotation";
        return NotEqual{field_diag};
    }

    const HarmonicMap rebuilt = post_affine(factors->affine, rotate_antianalytic(factors->rotation, f1));
    double replay = 0.0;
    complexd replay_worst = opts.grid.points().front();
    for (const complexd& z : opts.grid.points()) {
        const double d = std::abs(rebuilt.value(z) - f2.value(z));
        if (d > replay) {
            replay = d;
            replay_worst = z;
        }
    }
    if (replay > opts.witness_tol) {
        field_diag.note = "witness replay residual too large";
        field_diag.max_deviation = replay;
        field_diag.worst_point = replay_worst;
        return NotEqual{field_diag};
    }

    EqualNonConstant out{factors->affine, factors->rotation, *base,
                         std::max({agree, replay, factors->residual}), std::move(field_diag)};
    return out;
}

} // namespace detail

// Decide whether the harmonic Schwarzians of f1 and f2 agree on the disk and,
// if they do, reconstruct the transformation connecting the maps themselves.
inline ConnectionResult check_equal_schwarzian(const HarmonicMap& f1_in, const HarmonicMap& f2_in,
                                               const EqualityOptions& opts = {}) {
    const HarmonicMap f1 = f1_in.orientation_preserving() ? f1_in : conjugate(f1_in);
    const HarmonicMap f2 = f2_in.orientation_preserving() ? f2_in : conjugate(f2_in);

    FieldDiagnostics field_diag = detail::compare_schwarzian_fields(f1, f2, opts.grid);
    if (field_diag.max_deviation > opts.field_tol) {
        field_diag.note = "harmonic Schwarzian fields differ";
        return NotEqual{field_diag};
    }

    const DilatationClass c1 = classify_dilatation(f1, opts.grid, opts.constant_tol);
    const DilatationClass c2 = classify_dilatation(f2, opts.grid, opts.constant_tol);
    if (c1.constant != c2.constant) {
        field_diag.note = "one dilatation is constant and the other is not";
        return NotEqual{field_diag};
    }
    if (c1.constant) {
        return detail::connect_constant(f1, f2, c1, c2, std::move(field_diag), opts);
    }
    return detail::connect_nonconstant(f1, f2, std::move(field_diag), opts);
}

// ---------------------------------------------------------------------------
// Identity verification suites
// ---------------------------------------------------------------------------

struct IdentityReport {
    std::string name;
    double max_residual = 0.0;
    complexd worst_point{0.0, 0.0};
    double tolerance = tol::identity_residual;
    bool pass = false;
};

struct VerifyOptions {
    GridSpec grid = GridSpec::defaults();
    double tolerance = tol::identity_residual;
    double normalized_tol = tol::normalized_check;
};

namespace detail {

// Shared data for a pair of normalized maps with equal harmonic Schwarzian.
struct NormalizedPair {
    const HarmonicMap& f1;
    const HarmonicMap& f2;
    complexd a0;     // half the gap between the second analytic derivatives at 0
    complexd w1p0;   // dilatation derivative of f1 at 0
    complexd w2p0;   // dilatation derivative of f2 at 0
    complexd phi1_0; // (h1''/h1') w1' - w1'' at 0
    complexd phi2_0; // (h2''/h2') w2' - w2'' at 0

    static NormalizedPair make(const HarmonicMap& f1, const HarmonicMap& f2,
                               double normalized_tol) {
        if (!is_normalized(f1, normalized_tol)) {
            throw NotNormalized("first map is not normalized at the origin");
        }
        if (!is_normalized(f2, normalized_tol)) {
            throw NotNormalized("second map is not normalized at the origin");
        }
        const complexd z0(0.0, 0.0);
        const Jet3 h1 = eval_jet(f1.analytic(), z0);
        const Jet3 h2 = eval_jet(f2.analytic(), z0);
        const DilatationJet d1 = dilatation(f1, z0);
        const DilatationJet d2 = dilatation(f2, z0);
        NormalizedPair ctx{f1,
                           f2,
                           (h2.d2 / h2.d1 - h1.d2 / h1.d1) / 2.0,
                           d1.w1,
                           d2.w1,
                           (h1.d2 / h1.d1) * d1.w1 - d1.w2,
                           (h2.d2 / h2.d1) * d2.w1 - d2.w2};
        return ctx;
    }

    // delta(z) = (w1'(0)/2) conj(w1(z)) - (w2'(0)/2) conj(w2(z))
    complexd delta(complexd z) const {
        return 0.5 * w1p0 * std::conj(dilatation(f1, z).w) -
               0.5 * w2p0 * std::conj(dilatation(f2, z).w);
    }
};

inline complexd phi_field(const HarmonicMap& f, complexd z) {
    const Jet3 hj = eval_jet(f.analytic(), z);
    const DilatationJet d = dilatation(f, z);
    return (hj.d2 / hj.d1) * d.w1 - d.w2;
}

// Schwarzian of z -> h(z) - c * g(z) for a frozen complex constant c.
inline complexd frozen_combination_schwarzian(const HarmonicMap& f, complexd c, complexd z) {
    const Jet3 hj = eval_jet(f.analytic(), z);
    const Jet3 gj = eval_jet(f.co_analytic(), z);
    const Jet3 k = hj - c * gj;
    if (std::abs(k.d1) < tol::deriv_floor) {
        throw CriticalPoint("frozen combination has a critical point on the grid");
    }
    const complexd q2 = k.d2 / k.d1;
    return k.d3 / k.d1 - 1.5 * q2 * q2;
}

template <typename Fn>
inline IdentityReport run_residual_scan(std::string name, const GridSpec& grid, double tolerance,
                                        Fn&& residual_at) {
    IdentityReport rep;
    rep.name = std::move(name);
    rep.tolerance = tolerance;
    rep.worst_point = grid.points().front();
    for (const complexd& z : grid.points()) {
        const double r = residual_at(z);
        if (r > rep.max_residual) {
            rep.max_residual = r;
            rep.worst_point = z;
        }
    }
    rep.pass = rep.max_residual <= tolerance;
    return rep;
}

} // namespace detail

// Structural consequences of S_H(f1) = S_H(f2) for normalized maps: the
// analytic parts share their classical Schwarzian, the scaled dilatation
// fields agree, and the dilatations satisfy a quadratic cross-relation.
inline std::vector<IdentityReport> verify_prop31(const HarmonicMap& f1, const HarmonicMap& f2,
                                                 const VerifyOptions& opts = {}) {
    const detail::NormalizedPair ctx = detail::NormalizedPair::make(f1, f2, opts.normalized_tol);
    std::vector<IdentityReport> out;

    out.push_back(detail::run_residual_scan(
        "analytic-parts-share-schwarzian", opts.grid, opts.tolerance, [&](complexd z) {
            return std::abs(schwarzian(f1.analytic(), z) - schwarzian(f2.analytic(), z));
        }));

    out.push_back(detail::run_residual_scan(
        "scaled-dilatation-fields-agree", opts.grid, opts.tolerance, [&](complexd z) {
            return std::abs(ctx.w1p0 * detail::phi_field(f1, z) -
                            ctx.w2p0 * detail::phi_field(f2, z));
        }));

    out.push_back(detail::run_residual_scan(
        "dilatation-quadratic-relation", opts.grid, opts.tolerance, [&](complexd z) {
            const complexd w1 = dilatation(f1, z).w;
            const complexd w2 = dilatation(f2, z).w;
            const complexd lhs = std::conj(ctx.phi1_0) * w1 - 1.5 * ctx.w1p0 * ctx.w1p0 * w1 * w1;
            const complexd rhs = std::conj(ctx.phi2_0) * w2 - 1.5 * ctx.w2p0 * ctx.w2p0 * w2 * w2;
            return std::abs(lhs - rhs);
        }));

    return out;
}

// Default frozen parameters for verify_thm33: eight points on |w| = 0.3.
inline std::vector<complexd> default_frozen_samples() {
    std::vector<complexd> w;
    const double two_pi = 8.0 * std::atan(1.0);
    for (int k = 0; k < 8; ++k) {
        const double t = two_pi * k / 8.0;
        w.emplace_back(0.3 * std::cos(t), 0.3 * std::sin(t));
    }
    return w;
}

// For every frozen parameter w, the classical Schwarzians of the analytic
// combinations h_i - conj(omega_i(w)) g_i coincide as fields in z.
inline IdentityReport verify_thm33(const HarmonicMap& f1, const HarmonicMap& f2,
                                   const std::vector<complexd>& w_samples,
                                   const VerifyOptions& opts = {}) {
    (void)detail::NormalizedPair::make(f1, f2, opts.normalized_tol);
    IdentityReport rep;
    rep.name = "frozen-combination-schwarzians-agree";
    rep.tolerance = opts.tolerance;
    rep.worst_point = opts.grid.points().front();
    for (const complexd& w : w_samples) {
        const complexd c1 = std::conj(dilatation(f1, w).w);
        const complexd c2 = std::conj(dilatation(f2, w).w);
        for (const complexd& z : opts.grid.points()) {
            const double r = std::abs(detail::frozen_combination_schwarzian(f1, c1, z) -
                                      detail::frozen_combination_schwarzian(f2, c2, z));
            if (r > rep.max_residual) {
                rep.max_residual = r;
                rep.worst_point = z;
            }
        }
    }
    rep.pass = rep.max_residual <= opts.tolerance;
    return rep;
}

// Mobius relation between the analytic parts and between the frozen
// combinations of an equal-Schwarzian normalized pair.
inline std::vector<IdentityReport> verify_corollary(const HarmonicMap& f1, const HarmonicMap& f2,
                                                    const VerifyOptions& opts = {}) {
    const detail::NormalizedPair ctx = detail::NormalizedPair::make(f1, f2, opts.normalized_tol);
    std::vector<IdentityReport> out;

    out.push_back(detail::run_residual_scan(
        "analytic-parts-mobius-relation", opts.grid, opts.tolerance, [&](complexd z) {
            const complexd h1 = eval(f1.analytic(), z);
            const complexd h2 = eval(f2.analytic(), z);
            return std::abs(h1 - h2 / (1.0 + ctx.a0 * h2));
        }));

    out.push_back(detail::run_residual_scan(
        "frozen-combination-mobius-relation", opts.grid, opts.tolerance, [&](complexd z) {
            const complexd k1 = eval(f1.analytic(), z) -
                                std::conj(dilatation(f1, z).w) * eval(f1.co_analytic(), z);
            const complexd k2 = eval(f2.analytic(), z) -
                                std::conj(dilatation(f2, z).w) * eval(f2.co_analytic(), z);
            return std::abs(k1 - k2 / (1.0 + (ctx.a0 + ctx.delta(z)) * k2));
        }));

    return out;
}

// Seven-term bilinear identity linking the parts of both maps through the
// monomials in their dilatations. Requires non-constant dilatations.
inline IdentityReport verify_phi_identity(const HarmonicMap& f1, const HarmonicMap& f2,
                                          const VerifyOptions& opts = {}) {
    const detail::NormalizedPair ctx = detail::NormalizedPair::make(f1, f2, opts.normalized_tol);
    if (classify_dilatation(f1, opts.grid).constant ||
        classify_dilatation(f2, opts.grid).constant) {
        throw ConstantDilatationError(
            "the seven-term identity is vacuous for constant dilatations");
    }
    const complexd a0 = ctx.a0;
    const complexd p = ctx.w1p0;
    const complexd q = ctx.w2p0;

    return detail::run_residual_scan(
        "seven-term-cross-identity", opts.grid, opts.tolerance, [&](complexd z) {
            const complexd g1 = eval(f1.co_analytic(), z);
            const complexd h1 = eval(f1.analytic(), z);
            const complexd g2 = eval(f2.co_analytic(), z);
            const complexd h2 = eval(f2.analytic(), z);
            const complexd w1 = dilatation(f1, z).w;
            const complexd w2 = dilatation(f2, z).w;

            const complexd phi1 = g2 - a0 * h1 * g2 - 0.5 * q * h1 * h2;
            const complexd phi2 = 0.5 * q * h1 * g2;
            const complexd phi3 = 0.5 * p * g1 * g2;
            const complexd phi4 = -0.5 * q * g1 * g2;
            const complexd phi5 = a0 * g1 * g2 - 0.5 * p * h1 * g2 + 0.5 * q * g1 * h2;
            const complexd phi6 = -0.5 * p * g1 * h2;
            const complexd phi7 = 0.5 * p * h1 * h2 - a0 * g1 * h2 - g1;

            const complexd sum = phi1 * std::conj(w2) + phi2 * std::conj(w2 * w2) +
                                 phi3 * std::conj(w1 * w1 * w2) + phi4 * std::conj(w1 * w2 * w2) +
                                 phi5 * std::conj(w1 * w2) + phi6 * std::conj(w1 * w1) +
                                 phi7 * std::conj(w1);
            return std::abs(sum);
        });
}

// Series behaviour at the origin: the third derivative of the co-analytic
// part is pinned by the dilatation jet, and the leading cubic coefficient of
// the first seven-term numerator equals -Phi_2(0)/6.
inline std::vector<IdentityReport> verify_phi_lemma_limits(const HarmonicMap& f1,
                                                           const HarmonicMap& f2,
                                                           const VerifyOptions& opts = {}) {
    const detail::NormalizedPair ctx = detail::NormalizedPair::make(f1, f2, opts.normalized_tol);
    std::vector<IdentityReport> out;

    {
        IdentityReport rep;
        rep.name = "co-analytic-third-derivative";
        rep.tolerance = opts.tolerance;
        rep.worst_point = complexd(0.0, 0.0);
        const complexd z0(0.0, 0.0);
        for (const HarmonicMap* f : {&f1, &f2}) {
            const Jet3 gj = eval_jet(f->co_analytic(), z0);
            const Jet3 hj = eval_jet(f->analytic(), z0);
            const DilatationJet d = dilatation(*f, z0);
            const double r = std::abs(gj.d3 - (d.w2 + 2.0 * d.w1 * hj.d2));
            rep.max_residual = std::max(rep.max_residual, r);
        }
        rep.pass = rep.max_residual <= rep.tolerance;
        out.push_back(rep);
    }

    {
        IdentityReport rep;
        rep.name = "cubic-coefficient-limit";
        rep.tolerance = tol::limit_residual;
        rep.worst_point = complexd(0.0, 0.0);

        const complexd a0 = ctx.a0;
        const complexd q = ctx.w2p0;
        const auto phi1_over_z3 = [&](double r) {
            const complexd z(r, 0.0);
            const complexd g2 = eval(f2.co_analytic(), z);
            const complexd h1 = eval(f1.analytic(), z);
            const complexd h2 = eval(f2.analytic(), z);
            const complexd phi1 = g2 - a0 * h1 * g2 - 0.5 * q * h1 * h2;
            return phi1 / (z * z * z);
        };
        // Two Richardson levels on radii r, r/2, r/4 cancel the linear and
        // quadratic terms of the Taylor remainder.
        const double r = 1e-2;
        const complexd l0 = phi1_over_z3(r);
        const complexd l1 = phi1_over_z3(r / 2.0);
        const complexd l2 = phi1_over_z3(r / 4.0);
        const complexd a1 = 2.0 * l1 - l0;
        const complexd a2 = 2.0 * l2 - l1;
        const complexd limit = (4.0 * a2 - a1) / 3.0;

        rep.max_residual = std::abs(limit - (-ctx.phi2_0 / 6.0));
        rep.pass = rep.max_residual <= rep.tolerance;
        out.push_back(rep);
    }

    return out;
}

// ---------------------------------------------------------------------------
// Invariance suite: transformations that must leave S_H fixed, plus the
// recentering chain rule.
// ---------------------------------------------------------------------------

struct InvarianceOptions {
    GridSpec grid = GridSpec::defaults();
    std::uint64_t seed = 20260816u;
    int affine_count = 20;
    int rotation_count = 8;
    int automorphism_count = 5;
    double invariance_tol = 1e-10;
    double chain_rule_tol = 1e-9;
};

inline std::vector<IdentityReport> verify_invariance(const HarmonicMap& f,
                                                     const InvarianceOptions& opts = {}) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double two_pi = 8.0 * std::atan(1.0);
    std::vector<IdentityReport> out;

    {
        IdentityReport rep;
        rep.name = "affine-invariance";
        rep.tolerance = opts.invariance_tol;
        rep.worst_point = opts.grid.points().front();
        for (int i = 0; i < opts.affine_count; ++i) {
            const double ra = 0.35 * unit(rng);
            const double ta = two_pi * unit(rng);
            const double rb = 0.85 + 0.35 * unit(rng);
            const double tb = two_pi * unit(rng);
            const complexd a = ra * complexd(std::cos(ta), std::sin(ta));
            const complexd b = rb * complexd(std::cos(tb), std::sin(tb));
            const complexd c(2.0 * unit(rng) - 1.0, 2.0 * unit(rng) - 1.0);
            const HarmonicMap composed = post_affine(AffineMap(a, b, c), f);
            for (const complexd& z : opts.grid.points()) {
                const double r = std::abs(schwarzian_h_closed(composed, z) -
                                          schwarzian_h_closed(f, z));
                if (r > rep.max_residual) {
                    rep.max_residual = r;
                    rep.worst_point = z;
                }
            }
        }
        rep.pass = rep.max_residual <= rep.tolerance;
        out.push_back(rep);
    }

    {
        IdentityReport rep;
        rep.name = "rotation-invariance";
        rep.tolerance = opts.invariance_tol;
        rep.worst_point = opts.grid.points().front();
        for (int i = 0; i < opts.rotation_count; ++i) {
            const double t = two_pi * unit(rng);
            const HarmonicMap rotated =
                rotate_antianalytic(RotationMu(complexd(std::cos(t), std::sin(t))), f);
            for (const complexd& z : opts.grid.points()) {
                const double r =
                    std::abs(schwarzian_h_closed(rotated, z) - schwarzian_h_closed(f, z));
                if (r > rep.max_residual) {
                    rep.max_residual = r;
                    rep.worst_point = z;
                }
            }
        }
        rep.pass = rep.max_residual <= rep.tolerance;
        out.push_back(rep);
    }

    {
        IdentityReport rep;
        rep.name = "conjugation-invariance";
        rep.tolerance = opts.invariance_tol;
        rep.worst_point = opts.grid.points().front();
        const HarmonicMap flipped = conjugate(f);
        for (const complexd& z : opts.grid.points()) {
            const double r =
                std::abs(schwarzian_h_closed(flipped, z) - schwarzian_h_closed(f, z));
            if (r > rep.max_residual) {
                rep.max_residual = r;
                rep.worst_point = z;
            }
        }
        rep.pass = rep.max_residual <= rep.tolerance;
        out.push_back(rep);
    }

    {
        IdentityReport rep;
        rep.name = "recentering-chain-rule";
        rep.tolerance = opts.chain_rule_tol;
        rep.worst_point = opts.grid.points().front();
        for (int i = 0; i < opts.automorphism_count; ++i) {
            const double rw = 0.05 + 0.25 * unit(rng);
            const double tw = two_pi * unit(rng);
            const complexd w = rw * complexd(std::cos(tw), std::sin(tw));
            const Mobius phi = automorphism_as_mobius(DiskAutomorphism(w));
            const HarmonicMap pulled = precompose(f, Expr::mobius(phi));
            for (const complexd& z : opts.grid.points()) {
                const Jet3 pj = phi.jet(z);
                const complexd expected =
                    schwarzian_h_closed(f, pj.v) * pj.d1 * pj.d1 + schwarzian(Expr::mobius(phi), z);
                const double r = std::abs(schwarzian_h_closed(pulled, z) - expected);
                if (r > rep.max_residual) {
                    rep.max_residual = r;
                    rep.worst_point = z;
                }
            }
        }
        rep.pass = rep.max_residual <= rep.tolerance;
        out.push_back(rep);
    }

    return out;
}

} // namespace schwarz
