#pragma once

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "schwarz/expr.hpp"
#include "schwarz/harmonic.hpp"

// JSON document format for named harmonic maps.
//
//   {"maps": {"name": {"h": <expr>, "g": <expr>},
//             "other": {"h": [<complex>...], "omega": [<complex>...]}}}
//
// A complex number is a two-element array [re, im]. An expression is an
// object with exactly one tag key:
//   {"poly": [c0, c1, ...]}           ascending coefficients
//   {"mobius": [a, b, c, d]}          (az + b) / (cz + d)
//   {"exp": {}}                       exp(z)
//   {"identity": {}}                  z
//   {"const": c}                      constant c
//   {"add": [e1, e2]}  {"mul": [e1, e2]}  {"div": [num, den]}
//   {"compose": [outer, inner]}       outer(inner(z))
//   {"scale": [c, e]}                 c * e
//
// The h/omega form gives the analytic part as polynomial coefficients and
// the dilatation omega = g'/h' as polynomial coefficients; the co-analytic
// part is reconstructed exactly as the antiderivative of omega * h' with
// g(0) = 0. Parse errors carry the JSON-pointer-style path of the offending
// field. Emission is deterministic: maps sorted by name, one line.

namespace schwarz {

namespace detail {

inline nlohmann::json complex_to_json(complexd c) {
    return nlohmann::json::array({c.real(), c.imag()});
}

inline complexd complex_from_json(const nlohmann::json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ParseError(path + ": expected a complex number as [re, im]");
    }
    return complexd(j[0].get<double>(), j[1].get<double>());
}

inline std::vector<complexd> complex_list_from_json(const nlohmann::json& j,
                                                    const std::string& path) {
    if (!j.is_array()) throw ParseError(path + ": expected an array of complex numbers");
    std::vector<complexd> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(complex_from_json(j[i], path + "/" + std::to_string(i)));
    }
    return out;
}

inline nlohmann::json expr_to_json(const Expr& e);

inline nlohmann::json expr_pair_to_json(const Expr& a, const Expr& b) {
    return nlohmann::json::array({expr_to_json(a), expr_to_json(b)});
}

inline nlohmann::json expr_to_json(const Expr& e) {
    return std::visit(
        detail::overloaded{
            [](const PolyNode& n) {
                nlohmann::json coeffs = nlohmann::json::array();
                for (complexd c : n.coeffs) coeffs.push_back(complex_to_json(c));
                return nlohmann::json{{"poly", coeffs}};
            },
            [](const MobiusNode& n) {
                return nlohmann::json{
                    {"mobius", nlohmann::json::array({complex_to_json(n.T.a()),
                                                      complex_to_json(n.T.b()),
                                                      complex_to_json(n.T.c()),
                                                      complex_to_json(n.T.d())})}};
            },
            [](const ExpNode&) { return nlohmann::json{{"exp", nlohmann::json::object()}}; },
            [](const IdentityNode&) {
                return nlohmann::json{{"identity", nlohmann::json::object()}};
            },
            [](const ConstNode& n) { return nlohmann::json{{"const", complex_to_json(n.value)}}; },
            [](const AddNode& n) { return nlohmann::json{{"add", expr_pair_to_json(n.lhs, n.rhs)}}; },
            [](const MulNode& n) { return nlohmann::json{{"mul", expr_pair_to_json(n.lhs, n.rhs)}}; },
            [](const DivNode& n) { return nlohmann::json{{"div", expr_pair_to_json(n.num, n.den)}}; },
            [](const ComposeNode& n) {
                return nlohmann::json{{"compose", expr_pair_to_json(n.outer, n.inner)}};
            },
            [](const ScaleNode& n) {
                return nlohmann::json{
                    {"scale", nlohmann::json::array({complex_to_json(n.factor),
                                                     expr_to_json(n.arg)})}};
            },
        },
        e.node().v);
}

inline Expr expr_from_json(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object() || j.size() != 1) {
        throw ParseError(path + ": expected an expression object with exactly one tag key");
    }
    const std::string tag = j.begin().key();
    const nlohmann::json& body = j.begin().value();
    const std::string tag_path = path + "/" + tag;

    const auto expect_pair = [&]() -> std::pair<Expr, Expr> {
        if (!body.is_array() || body.size() != 2) {
            throw ParseError(tag_path + ": expected an array of two expressions");
        }
        return {expr_from_json(body[0], tag_path + "/0"), expr_from_json(body[1], tag_path + "/1")};
    };

    try {
        if (tag == "poly") return Expr::polynomial(complex_list_from_json(body, tag_path));
        if (tag == "mobius") {
            const std::vector<complexd> abcd = complex_list_from_json(body, tag_path);
            if (abcd.size() != 4) {
                throw ParseError(tag_path + ": expected exactly four coefficients [a, b, c, d]");
            }
            return Expr::mobius(Mobius(abcd[0], abcd[1], abcd[2], abcd[3]));
        }
        if (tag == "exp") return Expr::exponential();
        if (tag == "identity") return Expr::identity();
        if (tag == "const") return Expr::constant(complex_from_json(body, tag_path));
        if (tag == "add") {
            auto [a, b] = expect_pair();
            return add(a, b);
        }
        if (tag == "mul") {
            auto [a, b] = expect_pair();
            return mul(a, b);
        }
        if (tag == "div") {
            auto [a, b] = expect_pair();
            return divide(a, b);
        }
        if (tag == "compose") {
            auto [a, b] = expect_pair();
            return compose(a, b);
        }
        if (tag == "scale") {
            if (!body.is_array() || body.size() != 2) {
                throw ParseError(tag_path + ": expected [factor, expression]");
            }
            return scale(complex_from_json(body[0], tag_path + "/0"),
                         expr_from_json(body[1], tag_path + "/1"));
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(tag_path + ": " + e.what());
    }
    throw ParseError(tag_path + ": unknown expression tag");
}

} // namespace detail

struct MapDocument {
    std::vector<std::pair<std::string, HarmonicMap>> maps; // sorted by name

    const HarmonicMap& find(const std::string& name) const {
        for (const auto& [n, m] : maps) {
            if (n == name) return m;
        }
        throw ParseError("document has no map named '" + name + "'");
    }

    bool contains(const std::string& name) const {
        for (const auto& [n, m] : maps) {
            if (n == name) return true;
        }
        return false;
    }
};

inline MapDocument parse_document(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("document is not valid JSON: ") + e.what());
    }
    if (!root.is_object() || !root.contains("maps") || !root["maps"].is_object()) {
        throw ParseError("/: expected a top-level object with a \"maps\" object");
    }

    MapDocument doc;
    for (const auto& [name, body] : root["maps"].items()) {
        const std::string path = "/maps/" + name;
        if (!body.is_object()) throw ParseError(path + ": expected a map object");

        if (body.contains("omega")) {
            if (!body.contains("h") || body.size() != 2) {
                throw ParseError(path + ": the dilatation form needs exactly \"h\" and \"omega\"");
            }
            const std::vector<complexd> h = detail::complex_list_from_json(body["h"], path + "/h");
            const std::vector<complexd> w =
                detail::complex_list_from_json(body["omega"], path + "/omega");
            try {
                doc.maps.emplace_back(name, HarmonicMap::from_h_omega(h, w));
            } catch (const Error& e) {
                throw ValidationError(path + ": " + e.what());
            }
            continue;
        }

        if (!body.contains("h") || !body.contains("g") || body.size() != 2) {
            throw ParseError(path + ": expected \"h\" and \"g\" expressions (or \"h\"/\"omega\")");
        }
        const Expr h = detail::expr_from_json(body["h"], path + "/h");
        const Expr g = detail::expr_from_json(body["g"], path + "/g");
        try {
            doc.maps.emplace_back(name, HarmonicMap(g, h));
        } catch (const Error& e) {
            throw ValidationError(path + ": " + e.what());
        }
    }
    return doc;
}

inline nlohmann::json map_to_json(const HarmonicMap& f) {
    return nlohmann::json{{"g", detail::expr_to_json(f.co_analytic())},
                          {"h", detail::expr_to_json(f.analytic())}};
}

inline std::string emit_document(const MapDocument& doc) {
    nlohmann::json maps = nlohmann::json::object();
    for (const auto& [name, f] : doc.maps) {
        maps[name] = map_to_json(f);
    }
    return nlohmann::json{{"maps", maps}}.dump();
}

} // namespace schwarz
