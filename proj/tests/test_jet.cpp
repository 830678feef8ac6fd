#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "poly_oracle.hpp"
#include "schwarz/jet.hpp"

using schwarz::complexd;
using schwarz::Jet3;

namespace {

Jet3 to_jet3(const oracle::Jet& j) { return Jet3(j.v, j.d1, j.d2, j.d3); }

double jet_distance(const Jet3& a, const Jet3& b) {
    return std::max({std::abs(a.v - b.v), std::abs(a.d1 - b.d1), std::abs(a.d2 - b.d2),
                     std::abs(a.d3 - b.d3)});
}

} // namespace

TEST_CASE("jet arithmetic matches the symbolic polynomial oracle") {
    oracle::Gen gen(101);

    SECTION("product rule to third order") {
        for (int trial = 0; trial < 200; ++trial) {
            const oracle::Poly p = gen.poly(5);
            const oracle::Poly q = gen.poly(5);
            const oracle::cd z = gen.disk_point();

            const Jet3 lib = to_jet3(oracle::jet(p, z)) * to_jet3(oracle::jet(q, z));
            const Jet3 want = to_jet3(oracle::jet(oracle::mul(p, q), z));
            REQUIRE(jet_distance(lib, want) < 1e-11);
        }
    }

    SECTION("sum, difference and scalar multiple") {
        for (int trial = 0; trial < 100; ++trial) {
            const oracle::Poly p = gen.poly(4);
            const oracle::Poly q = gen.poly(4);
            const oracle::cd k = gen.coeff(2.0);
            const oracle::cd z = gen.disk_point();

            REQUIRE(jet_distance(to_jet3(oracle::jet(p, z)) + to_jet3(oracle::jet(q, z)),
                                 to_jet3(oracle::jet(oracle::add(p, q), z))) < 1e-12);
            REQUIRE(jet_distance(to_jet3(oracle::jet(p, z)) - to_jet3(oracle::jet(q, z)),
                                 to_jet3(oracle::jet(oracle::sub(p, q), z))) < 1e-12);
            REQUIRE(jet_distance(k * to_jet3(oracle::jet(p, z)),
                                 to_jet3(oracle::jet(oracle::scale(k, p), z))) < 1e-11);
        }
    }

    SECTION("quotient rule to third order") {
        for (int trial = 0; trial < 200; ++trial) {
            const oracle::Poly p = gen.poly(4);
            oracle::Poly q = gen.poly(3);
            q.resize(std::max<std::size_t>(q.size(), 1));
            q[0] += oracle::cd(3.0, 0.0); // keep the denominator away from zero on the disk
            const oracle::cd z = gen.disk_point();

            const Jet3 lib = schwarz::jet_div(to_jet3(oracle::jet(p, z)),
                                              to_jet3(oracle::jet(q, z)));
            const Jet3 want = to_jet3(oracle::jet(oracle::Rational{p, q}, z));
            REQUIRE(jet_distance(lib, want) < 1e-9);
        }
    }

    SECTION("composition (third-order chain rule)") {
        for (int trial = 0; trial < 200; ++trial) {
            const oracle::Poly outer = gen.poly(4);
            const oracle::Poly inner = gen.poly(4, 0.4);
            const oracle::cd z = gen.disk_point();

            const oracle::cd inner_value = oracle::eval(inner, z);
            const Jet3 lib = schwarz::jet_compose(to_jet3(oracle::jet(outer, inner_value)),
                                                  to_jet3(oracle::jet(inner, z)));
            const Jet3 want = to_jet3(oracle::jet(oracle::compose(outer, inner), z));
            REQUIRE(jet_distance(lib, want) < 1e-9);
        }
    }
}

TEST_CASE("jet construction and guards") {
    SECTION("variable and constant jets") {
        const Jet3 var = Jet3::variable(complexd(0.3, -0.2));
        REQUIRE(var.v == complexd(0.3, -0.2));
        REQUIRE(var.d1 == complexd(1.0, 0.0));
        REQUIRE(var.d2 == complexd(0.0, 0.0));
        REQUIRE(var.d3 == complexd(0.0, 0.0));

        const Jet3 con = Jet3::constant(complexd(2.0, 1.0));
        REQUIRE(con.v == complexd(2.0, 1.0));
        REQUIRE(con.d1 == complexd(0.0, 0.0));
    }

    SECTION("non-finite components are rejected") {
        const double inf = std::numeric_limits<double>::infinity();
        REQUIRE_THROWS_AS(Jet3(complexd(inf, 0.0), 0.0, 0.0, 0.0), schwarz::NonFiniteValue);
        REQUIRE_THROWS_AS(Jet3(0.0, complexd(0.0, std::nan("")), 0.0, 0.0),
                          schwarz::NonFiniteValue);
    }

    SECTION("division by a near-zero jet value throws") {
        const Jet3 num = Jet3::variable(complexd(0.5, 0.0));
        const Jet3 den(complexd(1e-15, 0.0), 1.0, 0.0, 0.0);
        REQUIRE_THROWS_AS(schwarz::jet_div(num, den), schwarz::DivisionByZeroJet);
    }

    SECTION("division floor is configurable") {
        const Jet3 num = Jet3::constant(1.0);
        const Jet3 den(complexd(1e-15, 0.0), 0.0, 0.0, 0.0);
        const Jet3 q = schwarz::jet_div(num, den, 1e-16);
        REQUIRE(std::abs(q.v - complexd(1e15, 0.0)) < 1.0);
    }
}
