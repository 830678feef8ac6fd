#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "poly_oracle.hpp"
#include "schwarz/grid.hpp"
#include "schwarz/harmonic.hpp"
#include "schwarz/wirtinger.hpp"

using schwarz::AffineMap;
using schwarz::complexd;
using schwarz::Expr;
using schwarz::HarmonicMap;
using schwarz::PairLinearMap;
using schwarz::RotationMu;

namespace {

// Shared fixtures: orientation-preserving maps with varied dilatations.
HarmonicMap map_omega_z() {
    // h = z, omega = z, g = z^2/2
    return HarmonicMap(Expr::polynomial({0.0, 0.0, 0.5}), Expr::polynomial({0.0, 1.0}));
}

HarmonicMap map_omega_z2() {
    // h = z, omega = z^2, g = z^3/3
    return HarmonicMap(Expr::polynomial({0.0, 0.0, 0.0, complexd(1.0 / 3.0, 0.0)}),
                       Expr::polynomial({0.0, 1.0}));
}

HarmonicMap map_rich() {
    // h = z + 0.05 z^2, omega = 0.1 + 0.8 z
    return HarmonicMap::from_h_omega({complexd(0.0, 0.0), complexd(1.0, 0.0), complexd(0.05, 0.0)},
                                     {complexd(0.1, 0.0), complexd(0.8, 0.0)});
}

HarmonicMap map_exp_based() {
    // h = e^z, g = 0.25 e^z: constant dilatation 0.25
    return HarmonicMap(scale(complexd(0.25, 0.0), Expr::exponential()), Expr::exponential());
}

std::vector<HarmonicMap> two_sided_maps() {
    return {map_omega_z(), map_omega_z2(), map_rich()};
}

} // namespace

TEST_CASE("construction and validation of harmonic maps") {
    SECTION("from_h_omega produces the exact antiderivative") {
        // h = z + 0.05 z^2 -> h' = 1 + 0.1 z; omega = 0.1 + 0.8 z
        // g' = omega h' = 0.1 + 0.81 z + 0.08 z^2
        // g   = 0.1 z + 0.405 z^2 + (0.08/3) z^3
        const HarmonicMap f = map_rich();
        const oracle::Poly expected = {0.0, 0.1, 0.405, 0.08 / 3.0};
        oracle::Gen gen(11);
        for (int i = 0; i < 30; ++i) {
            const complexd z = gen.disk_point();
            REQUIRE(std::abs(eval(f.co_analytic(), z) - oracle::eval(expected, z)) < 1e-15);
        }
        REQUIRE(std::abs(eval(f.co_analytic(), complexd(0.0, 0.0))) == 0.0);
    }

    SECTION("maps whose Jacobian crosses zero on the grid are rejected") {
        // h = z, g = 0.9 z^2: |g'| = 1.8|z| crosses |h'| = 1 inside the grid.
        REQUIRE_THROWS_AS(
            HarmonicMap(Expr::polynomial({0.0, 0.0, 0.9}), Expr::polynomial({0.0, 1.0})),
            schwarz::ValidationError);
    }

    SECTION("orientation flag") {
        REQUIRE(map_omega_z().orientation_preserving());
        REQUIRE_FALSE(conjugate(map_omega_z()).orientation_preserving());
    }

    SECTION("value is conj(g) + h") {
        const HarmonicMap f = map_omega_z();
        const complexd z(0.3, 0.2);
        REQUIRE(std::abs(f.value(z) - (std::conj(z * z * 0.5) + z)) < 1e-16);
    }
}

TEST_CASE("dilatation and Jacobian against the oracle") {
    oracle::Gen gen(12);

    SECTION("dilatation jet of a polynomial pair") {
        // g' / h' as a rational oracle for h = z + 0.05 z^2, g from map_rich.
        const HarmonicMap f = map_rich();
        const oracle::Poly gp = {0.1, 0.81, 0.08};
        const oracle::Poly hp = {1.0, 0.1};
        for (int i = 0; i < 40; ++i) {
            const complexd z = gen.disk_point();
            const oracle::Jet want = oracle::jet(oracle::Rational{gp, hp}, z);
            const schwarz::DilatationJet got = dilatation(f, z);
            REQUIRE(std::abs(got.w - want.v) < 1e-13);
            REQUIRE(std::abs(got.w1 - want.d1) < 1e-12);
            REQUIRE(std::abs(got.w2 - want.d2) < 1e-12);
        }
    }

    SECTION("jacobian = |h'|^2 - |g'|^2") {
        const HarmonicMap f = map_rich();
        for (int i = 0; i < 40; ++i) {
            const complexd z = gen.disk_point();
            const complexd hp = complexd(1.0, 0.0) + 0.1 * z;
            const complexd gp = oracle::eval({0.1, 0.81, 0.08}, z);
            REQUIRE(std::abs(jacobian(f, z) - (std::norm(hp) - std::norm(gp))) < 1e-14);
        }
    }

    SECTION("dilatation at a critical point of h") {
        // h = z^2 has h'(0) = 0.
        const Expr h = Expr::polynomial({0.0, 0.0, 1.0});
        const Expr g = Expr::polynomial({0.0, 0.0, 0.0, 0.1});
        REQUIRE_THROWS_AS(
            schwarz::detail::dilatation_from_jets(g.jet_at(complexd(0.0, 0.0)),
                                                  h.jet_at(complexd(0.0, 0.0)),
                                                  complexd(0.0, 0.0)),
            schwarz::CriticalPoint);
    }
}

TEST_CASE("pre-Schwarzian routes agree with each other and the definition") {
    SECTION("two closed formulas coincide") {
        for (const HarmonicMap& f : two_sided_maps()) {
            for (complexd z : schwarz::default_grid()) {
                REQUIRE(std::abs(pre_schwarzian_h(f, z) - pre_schwarzian_h_via_jacobian(f, z)) <
                        1e-12);
            }
        }
    }

    SECTION("analytic map: pre-Schwarzian collapses to h''/h'") {
        const HarmonicMap f(Expr::polynomial({0.0}), Expr::exponential());
        for (complexd z : schwarz::default_grid()) {
            REQUIRE(std::abs(pre_schwarzian_h(f, z) - complexd(1.0, 0.0)) < 1e-14);
        }
    }

    SECTION("d_z log J equals the closed pre-Schwarzian (finite differences)") {
        for (const HarmonicMap& f : two_sided_maps()) {
            const std::function<complexd(complexd)> logJ = [&f](complexd p) {
                return complexd(std::log(jacobian(f, p)), 0.0);
            };
            for (complexd z : {complexd(0.3, 0.1), complexd(-0.2, 0.4), complexd(0.0, -0.5)}) {
                const complexd fd =
                    schwarz::wirtinger_dz(logJ, z, schwarz::WirtingerStencil::defaults());
                REQUIRE(std::abs(fd - pre_schwarzian_h(f, z)) < 1e-8);
            }
        }
    }
}

TEST_CASE("Schwarzian routes") {
    SECTION("closed vs pointwise vs finite-difference definition") {
        for (const HarmonicMap& f : two_sided_maps()) {
            for (complexd z : schwarz::default_grid()) {
                const complexd closed = schwarzian_h_closed(f, z);
                REQUIRE(std::abs(closed - schwarzian_h_pointwise(f, z)) < 1e-10);
                REQUIRE(std::abs(closed - schwarzian_h_definition(f, z)) < 1e-5);
            }
        }
    }

    SECTION("constant dilatation collapses to the classical Schwarzian of h") {
        const HarmonicMap affine_exp = map_exp_based();
        for (complexd z : schwarz::default_grid()) {
            REQUIRE(std::abs(schwarzian_h_closed(affine_exp, z) -
                             schwarzian(affine_exp.analytic(), z)) < 1e-12);
        }
    }

    SECTION("conjugate map has the same Schwarzian field") {
        for (const HarmonicMap& f : two_sided_maps()) {
            const HarmonicMap fc = conjugate(f);
            for (complexd z : schwarz::default_grid()) {
                REQUIRE(std::abs(schwarzian_h_closed(fc, z) - schwarzian_h_closed(f, z)) < 1e-10);
            }
        }
    }
}

TEST_CASE("transformations of the pair") {
    oracle::Gen gen(13);

    SECTION("post_affine computes A o f pointwise") {
        const AffineMap A(complexd(0.2, -0.1), complexd(1.1, 0.3), complexd(0.4, 0.2));
        for (const HarmonicMap& f : two_sided_maps()) {
            const HarmonicMap af = post_affine(A, f);
            for (int i = 0; i < 25; ++i) {
                const complexd z = gen.disk_point();
                REQUIRE(std::abs(af.value(z) - A(f.value(z))) < 1e-14);
            }
        }
    }

    SECTION("rotation computes mu conj(g) + h pointwise") {
        const RotationMu R(complexd(0.6, 0.8));
        const HarmonicMap f = map_omega_z();
        const HarmonicMap rf = rotate_antianalytic(R, f);
        for (int i = 0; i < 25; ++i) {
            const complexd z = gen.disk_point();
            const complexd want = R.mu * std::conj(eval(f.co_analytic(), z)) +
                                  eval(f.analytic(), z);
            REQUIRE(std::abs(rf.value(z) - want) < 1e-14);
        }
    }

    SECTION("rotation acts on the dilatation by conj(mu)") {
        const RotationMu R(std::polar(1.0, 0.7));
        const HarmonicMap f = map_rich();
        const HarmonicMap rf = rotate_antianalytic(R, f);
        for (int i = 0; i < 25; ++i) {
            const complexd z = gen.disk_point();
            REQUIRE(std::abs(dilatation(rf, z).w - std::conj(R.mu) * dilatation(f, z).w) <
                    1e-14);
        }
    }

    SECTION("conjugation swaps the pair and conjugates values") {
        const HarmonicMap f = map_rich();
        const HarmonicMap fc = conjugate(f);
        for (int i = 0; i < 25; ++i) {
            const complexd z = gen.disk_point();
            REQUIRE(std::abs(fc.value(z) - std::conj(f.value(z))) < 1e-16);
        }
    }

    SECTION("precompose evaluates f o phi") {
        const Expr phi = Expr::polynomial({0.0, 0.6, 0.0, 0.1}); // maps disk into disk
        const HarmonicMap f = map_omega_z();
        const HarmonicMap fp = precompose(f, phi);
        for (int i = 0; i < 25; ++i) {
            const complexd z = gen.disk_point();
            REQUIRE(std::abs(fp.value(z) - f.value(eval(phi, z))) < 1e-14);
        }
    }

    SECTION("precompose rejects maps leaving the disk") {
        REQUIRE_THROWS_AS(precompose(map_omega_z(), Expr::polynomial({0.0, 1.3})),
                          schwarz::RangeViolation);
    }

    SECTION("precompose rejects arguments with a critical point on the grid") {
        // phi = 0.3 (z - 0.3)^2: phi' vanishes at the grid point z = 0.3.
        REQUIRE_THROWS_AS(
            precompose(map_omega_z(), Expr::polynomial({0.027, -0.18, 0.3})),
            schwarz::RangeViolation);
    }

    SECTION("affine admissibility") {
        REQUIRE_THROWS_AS(AffineMap(complexd(0.5, 0.0), complexd(0.0, 0.5), 0.0),
                          schwarz::ValidationError);
        REQUIRE_THROWS_AS(RotationMu(complexd(0.0, 0.0)), schwarz::ValidationError);
    }
}

TEST_CASE("pair-linear maps") {
    SECTION("compose and inverse round trip") {
        const PairLinearMap M1(complexd(1.0, 0.2), complexd(0.1, -0.1), complexd(0.0, 0.3),
                               complexd(0.9, 0.0), complexd(0.2, 0.0), complexd(-0.1, 0.4));
        const PairLinearMap M2(complexd(0.8, -0.1), 0.0, complexd(0.2, 0.2), complexd(1.1, 0.1),
                               0.0, complexd(0.3, 0.0));
        const PairLinearMap prod = compose(M2, M1);
        const PairLinearMap inv = inverse(prod);
        const PairLinearMap round = compose(inv, prod);
        REQUIRE(std::abs(round.m11 - complexd(1.0, 0.0)) < 1e-14);
        REQUIRE(std::abs(round.m12) < 1e-14);
        REQUIRE(std::abs(round.m21) < 1e-14);
        REQUIRE(std::abs(round.m22 - complexd(1.0, 0.0)) < 1e-14);
        REQUIRE(std::abs(round.t1) < 1e-14);
        REQUIRE(std::abs(round.t2) < 1e-14);
    }

    SECTION("apply_pair_linear matches the matrix action pointwise") {
        const HarmonicMap f = map_omega_z();
        const PairLinearMap M(complexd(0.9, 0.1), complexd(0.2, 0.0), complexd(-0.1, 0.0),
                              complexd(1.2, -0.2), complexd(0.05, 0.0), complexd(0.0, 0.3));
        const HarmonicMap mf = apply_pair_linear(M, f);
        oracle::Gen gen(14);
        for (int i = 0; i < 25; ++i) {
            const complexd z = gen.disk_point();
            const complexd g = eval(f.co_analytic(), z);
            const complexd h = eval(f.analytic(), z);
            REQUIRE(std::abs(eval(mf.co_analytic(), z) - (M.m11 * g + M.m12 * h + M.t1)) <
                    1e-14);
            REQUIRE(std::abs(eval(mf.analytic(), z) - (M.m21 * g + M.m22 * h + M.t2)) < 1e-14);
        }
    }

    SECTION("degenerate pair matrix is rejected") {
        REQUIRE_THROWS_AS(PairLinearMap(1.0, 2.0, 0.5, 1.0, 0.0, 0.0), schwarz::ValidationError);
    }

    SECTION("factoring an affine-rotation product recovers the factors") {
        const AffineMap A(complexd(0.15, 0.1), complexd(1.05, -0.2), complexd(0.3, 0.05));
        const RotationMu R(std::polar(1.0, 1.1));
        const PairLinearMap M =
            compose(PairLinearMap::from_affine(A), PairLinearMap::from_rotation(R));
        const auto factors = factor_pair_linear(M);
        REQUIRE(factors.has_value());
        REQUIRE(std::abs(factors->affine.a - A.a) < 1e-13);
        REQUIRE(std::abs(factors->affine.b - A.b) < 1e-13);
        REQUIRE(std::abs(factors->affine.c - A.c) < 1e-13);
        REQUIRE(std::abs(factors->rotation.mu - R.mu) < 1e-13);
        REQUIRE(factors->residual < 1e-13);
    }

    SECTION("pure affine factors with trivial rotation") {
        const AffineMap A(complexd(0.0, 0.0) + complexd(0.2, 0.0), complexd(1.0, 0.0),
                          complexd(0.0, -0.4));
        const auto factors = factor_pair_linear(PairLinearMap::from_affine(A));
        REQUIRE(factors.has_value());
        REQUIRE(std::abs(factors->rotation.mu - complexd(1.0, 0.0)) < 1e-14);
    }

    SECTION("maps outside the affine-rotation family are refused") {
        // t1 != 0 is never of the factored form.
        REQUIRE_FALSE(factor_pair_linear(
                          PairLinearMap(1.0, 0.0, 0.0, 1.0, complexd(0.1, 0.0), 0.0))
                          .has_value());
        // m11 inconsistent with conj(m22 mu): generic matrix.
        REQUIRE_FALSE(factor_pair_linear(
                          PairLinearMap(complexd(0.3, 0.0), complexd(0.5, 0.0),
                                        complexd(0.1, 0.0), complexd(1.0, 0.0), 0.0, 0.0))
                          .has_value());
    }
}
