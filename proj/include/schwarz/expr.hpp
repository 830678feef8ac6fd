#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <sstream>
#include <utility>
#include <variant>
#include <vector>

#include "schwarz/errors.hpp"
#include "schwarz/grid.hpp"
#include "schwarz/jet.hpp"
#include "schwarz/mobius.hpp"

// Closed-form analytic functions on the unit disk, represented as immutable
// expression trees. Leaves: polynomials (ascending coefficients), Mobius
// transformations, exp, the identity, constants. Interior nodes: add, mul,
// div, compose, and scaling by a complex constant. Every node evaluates an
// exact 3-jet; there are no truncated power series anywhere. Logarithms are
// deliberately absent: their branch cuts have no canonical placement on
// disk images, while exp covers the constructions we need.
//
// Construction is validating: each factory evaluates the new tree on the
// default grid and rejects trees that hit poles, division floors, or
// non-finite values there. In particular a compose node is accepted only if
// the inner expression maps the sampled disk into the region where the
// outer expression evaluates cleanly.

namespace schwarz {

namespace detail {

// Value of the d-th derivative of the polynomial with ascending
// coefficients c, via Horner on the derived coefficients.
inline complexd poly_derivative_value(const std::vector<complexd>& c, complexd z, int d) {
    complexd acc = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= d; --k) {
        double fac = 1.0;
        for (int j = 0; j < d; ++j) fac *= static_cast<double>(k - j);
        acc = acc * z + fac * c[static_cast<std::size_t>(k)];
    }
    return acc;
}

inline Jet3 poly_jet(const std::vector<complexd>& c, complexd z) {
    return Jet3(poly_derivative_value(c, z, 0), poly_derivative_value(c, z, 1),
                poly_derivative_value(c, z, 2), poly_derivative_value(c, z, 3));
}

} // namespace detail

class Expr;

struct PolyNode {
    std::vector<complexd> coeffs; // ascending powers
};
struct MobiusNode {
    Mobius T;
};
struct ExpNode {};
struct IdentityNode {};
struct ConstNode {
    complexd value;
};
struct AddNode;
struct MulNode;
struct DivNode;
struct ComposeNode;
struct ScaleNode;

class Expr {
public:
    struct Node;

    static Expr polynomial(std::vector<complexd> coeffs);
    static Expr mobius(const Mobius& T);
    static Expr exponential();
    static Expr identity();
    static Expr constant(complexd c);

    friend Expr add(const Expr& lhs, const Expr& rhs);
    friend Expr mul(const Expr& lhs, const Expr& rhs);
    friend Expr divide(const Expr& num, const Expr& den);
    friend Expr compose(const Expr& outer, const Expr& inner);
    friend Expr scale(complexd factor, const Expr& arg);

    // 3-jet at z, with no domain gate; use eval_jet for the checked entry
    // point. Compose nodes evaluate their outer part wherever the inner
    // expression lands, which is how entire outer factors get sampled
    // outside the disk.
    Jet3 jet_at(complexd z) const;

    const Node& node() const { return *node_; }

private:
    std::shared_ptr<const Node> node_;

    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Expr make(Node&& n);
};

struct AddNode {
    Expr lhs, rhs;
};
struct MulNode {
    Expr lhs, rhs;
};
struct DivNode {
    Expr num, den;
};
struct ComposeNode {
    Expr outer, inner;
};
struct ScaleNode {
    complexd factor;
    Expr arg;
};

struct Expr::Node {
    std::variant<PolyNode, MobiusNode, ExpNode, IdentityNode, ConstNode, AddNode, MulNode,
                 DivNode, ComposeNode, ScaleNode>
        v;
};

namespace detail {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
} // namespace detail

inline Jet3 Expr::jet_at(complexd z) const {
    return std::visit(
        detail::overloaded{
            [&](const PolyNode& n) { return detail::poly_jet(n.coeffs, z); },
            [&](const MobiusNode& n) { return n.T.jet(z); },
            [&](const ExpNode&) {
                const complexd e = std::exp(z);
                return Jet3(e, e, e, e);
            },
            [&](const IdentityNode&) { return Jet3::variable(z); },
            [&](const ConstNode& n) { return Jet3::constant(n.value); },
            [&](const AddNode& n) { return n.lhs.jet_at(z) + n.rhs.jet_at(z); },
            [&](const MulNode& n) { return n.lhs.jet_at(z) * n.rhs.jet_at(z); },
            [&](const DivNode& n) { return jet_div(n.num.jet_at(z), n.den.jet_at(z)); },
            [&](const ComposeNode& n) {
                const Jet3 ji = n.inner.jet_at(z);
                return jet_compose(n.outer.jet_at(ji.v), ji);
            },
            [&](const ScaleNode& n) { return n.factor * n.arg.jet_at(z); },
        },
        node_->v);
}

inline Expr Expr::make(Node&& n) {
    Expr e(std::make_shared<const Node>(std::move(n)));
    for (complexd p : default_grid()) {
        try {
            (void)e.jet_at(p);
        } catch (const Error& err) {
            std::ostringstream os;
            os << "expression fails to evaluate at grid point (" << p.real() << ", " << p.imag()
               << "): " << err.what();
            throw ValidationError(os.str());
        }
    }
    return e;
}

inline Expr Expr::polynomial(std::vector<complexd> coeffs) {
    for (complexd c : coeffs) {
        if (!is_finite(c)) throw ValidationError("polynomial coefficient is not finite");
    }
    return make(Node{PolyNode{std::move(coeffs)}});
}

inline Expr Expr::mobius(const Mobius& T) { return make(Node{MobiusNode{T}}); }

inline Expr Expr::exponential() { return make(Node{ExpNode{}}); }

inline Expr Expr::identity() { return make(Node{IdentityNode{}}); }

inline Expr Expr::constant(complexd c) {
    if (!is_finite(c)) throw ValidationError("constant is not finite");
    return make(Node{ConstNode{c}});
}

inline Expr add(const Expr& lhs, const Expr& rhs) { return Expr::make(Expr::Node{AddNode{lhs, rhs}}); }

inline Expr mul(const Expr& lhs, const Expr& rhs) { return Expr::make(Expr::Node{MulNode{lhs, rhs}}); }

inline Expr divide(const Expr& num, const Expr& den) {
    return Expr::make(Expr::Node{DivNode{num, den}});
}

inline Expr compose(const Expr& outer, const Expr& inner) {
    return Expr::make(Expr::Node{ComposeNode{outer, inner}});
}

inline Expr scale(complexd factor, const Expr& arg) {
    if (!is_finite(factor)) throw ValidationError("scale factor is not finite");
    return Expr::make(Expr::Node{ScaleNode{factor, arg}});
}

// Structural tree equality with exact value comparison. Used by the
// document round-trip contract.
inline bool structurally_equal(const Expr& a, const Expr& b) {
    const auto& va = a.node().v;
    const auto& vb = b.node().v;
    if (va.index() != vb.index()) return false;
    return std::visit(
        detail::overloaded{
            [&](const PolyNode& na) {
                return na.coeffs == std::get<PolyNode>(vb).coeffs;
            },
            [&](const MobiusNode& na) {
                const auto& nb = std::get<MobiusNode>(vb);
                return na.T.a() == nb.T.a() && na.T.b() == nb.T.b() && na.T.c() == nb.T.c() &&
                       na.T.d() == nb.T.d();
            },
            [&](const ExpNode&) { return true; },
            [&](const IdentityNode&) { return true; },
            [&](const ConstNode& na) { return na.value == std::get<ConstNode>(vb).value; },
            [&](const AddNode& na) {
                const auto& nb = std::get<AddNode>(vb);
                return structurally_equal(na.lhs, nb.lhs) && structurally_equal(na.rhs, nb.rhs);
            },
            [&](const MulNode& na) {
                const auto& nb = std::get<MulNode>(vb);
                return structurally_equal(na.lhs, nb.lhs) && structurally_equal(na.rhs, nb.rhs);
            },
            [&](const DivNode& na) {
                const auto& nb = std::get<DivNode>(vb);
                return structurally_equal(na.num, nb.num) && structurally_equal(na.den, nb.den);
            },
            [&](const ComposeNode& na) {
                const auto& nb = std::get<ComposeNode>(vb);
                return structurally_equal(na.outer, nb.outer) &&
                       structurally_equal(na.inner, nb.inner);
            },
            [&](const ScaleNode& na) {
                const auto& nb = std::get<ScaleNode>(vb);
                return na.factor == nb.factor && structurally_equal(na.arg, nb.arg);
            },
        },
        va);
}

// Checked jet evaluation: z must lie strictly inside the unit disk.
inline Jet3 eval_jet(const Expr& f, complexd z) {
    if (!(std::abs(z) < 1.0)) {
        std::ostringstream os;
        os << "evaluation point (" << z.real() << ", " << z.imag() << ") not inside the disk";
        throw PointOutsideDisk(os.str());
    }
    return f.jet_at(z);
}

inline complexd eval(const Expr& f, complexd z) { return eval_jet(f, z).v; }

// f''/f' at z.
inline complexd pre_schwarzian(const Expr& f, complexd z) {
    const Jet3 j = eval_jet(f, z);
    if (std::abs(j.d1) < tol::deriv_floor) {
        std::ostringstream os;
        os << "derivative modulus " << std::abs(j.d1) << " below floor at (" << z.real() << ", "
           << z.imag() << ")";
        throw CriticalPoint(os.str());
    }
    return j.d2 / j.d1;
}

// S(f) = f'''/f' - (3/2)(f''/f')^2 at z.
inline complexd schwarzian(const Expr& f, complexd z) {
    const Jet3 j = eval_jet(f, z);
    if (std::abs(j.d1) < tol::deriv_floor) {
        std::ostringstream os;
        os << "derivative modulus " << std::abs(j.d1) << " below floor at (" << z.real() << ", "
           << z.imag() << ")";
        throw CriticalPoint(os.str());
    }
    const complexd p = j.d2 / j.d1;
    return j.d3 / j.d1 - 1.5 * p * p;
}

namespace tol {
// Precondition and residual tolerance for Mobius recovery.
inline constexpr double mobius_recovery = 1e-8;
} // namespace tol

// Given f1, f2 with equal classical Schwarzians (checked on the default
// grid), reconstruct the Mobius T with f1 = T o f2 from the two 3-jets at a
// single point, then verify the reconstruction pointwise on the grid.
// z0 defaults to 0, falling back to the first grid point where both
// derivatives have modulus >= 1e-6.
inline Mobius recover_mobius(const Expr& f1, const Expr& f2,
                             std::optional<complexd> z0 = std::nullopt) {
    const auto& grid = default_grid();
    double dev = 0.0;
    for (complexd p : grid) {
        dev = std::max(dev, std::abs(schwarzian(f1, p) - schwarzian(f2, p)));
    }
    if (dev > tol::mobius_recovery) {
        std::ostringstream os;
        os << "schwarzians differ by " << dev << " on the grid; no Mobius connection exists";
        throw NotEquivalent(os.str());
    }

    const double floor = 1e-6;
    complexd base;
    if (z0) {
        base = *z0;
        if (!(std::abs(base) < 1.0)) throw PointOutsideDisk("mobius recovery base point outside disk");
        if (std::abs(eval_jet(f1, base).d1) < floor || std::abs(eval_jet(f2, base).d1) < floor) {
            throw CriticalPoint("mobius recovery base point has near-vanishing derivative");
        }
    } else {
        base = complexd(0.0, 0.0);
        bool found = std::abs(eval_jet(f1, base).d1) >= floor &&
                     std::abs(eval_jet(f2, base).d1) >= floor;
        for (std::size_t i = 0; !found && i < grid.size(); ++i) {
            base = grid[i];
            found = std::abs(eval_jet(f1, base).d1) >= floor &&
                    std::abs(eval_jet(f2, base).d1) >= floor;
        }
        if (!found) throw CriticalPoint("no usable base point for mobius recovery");
    }

    const Jet3 u = eval_jet(f2, base);
    const Jet3 v = eval_jet(f1, base);
    // Matching value, first and second derivative of T at u.v determines T:
    // with q = c u + d and unit determinant, T' = 1/q^2 and T''/T' = -2c/q.
    const complexd t1 = v.d1 / u.d1;
    const complexd t2 = (v.d2 - t1 * u.d2) / (u.d1 * u.d1);
    const complexd q = 1.0 / std::sqrt(t1);
    const complexd c = -t2 / (2.0 * t1) * q;
    const complexd d = q - c * u.v;
    const complexd a = v.v * c + 1.0 / q;
    const complexd b = v.v * q - a * u.v;
    const Mobius T(a, b, c, d);

    double res = 0.0;
    for (complexd p : grid) {
        res = std::max(res, std::abs(eval(f1, p) - T(eval(f2, p))));
    }
    if (res > tol::mobius_recovery) {
        std::ostringstream os;
        os << "mobius reconstruction residual " << res << " exceeds " << tol::mobius_recovery;
        throw NotEquivalent(os.str());
    }
    return T;
}

} // namespace schwarz
