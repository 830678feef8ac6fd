// Command-line front end for the harmonic Schwarzian toolkit.
//
// Subcommands:
//   eval NAME QUANTITY     evaluate a field over a disk grid (csv or json)
//   check-equal NAME NAME  decide Schwarzian equality, reconstruct a witness
//   normalize NAME         canonical normalization at a base point
//   verify SUITE NAME...   run identity / invariance suites
//
// Exit codes: 0 pass/equal, 1 not-equal or failed identity, 2 input or
// evaluation error, 3 precondition violated (reported as skipped).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "schwarz/schwarz.hpp"

namespace {

using schwarz::complexd;
using nlohmann::json;

json cjson(complexd c) { return json::array({c.real(), c.imag()}); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw schwarz::ParseError("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

complexd parse_complex_pair(const std::string& text, const std::string& what) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw schwarz::ParseError(what + ": expected RE,IM but got '" + text + "'");
    }
    try {
        std::size_t used = 0;
        const double re = std::stod(text.substr(0, comma), &used);
        if (used != comma) throw std::invalid_argument("trailing characters");
        const std::string imtext = text.substr(comma + 1);
        const double im = std::stod(imtext, &used);
        if (used != imtext.size()) throw std::invalid_argument("trailing characters");
        return complexd(re, im);
    } catch (const std::exception&) {
        throw schwarz::ParseError(what + ": expected RE,IM but got '" + text + "'");
    }
}

struct GridFlags {
    std::string radii_text;
    int angles = 16;
    double max_radius = 0.0; // 0 = no cap

    schwarz::GridSpec build() const {
        std::vector<double> radii;
        if (radii_text.empty()) {
            radii = schwarz::GridSpec::defaults().radii;
        } else {
            std::stringstream ss(radii_text);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                try {
                    std::size_t used = 0;
                    const double r = std::stod(tok, &used);
                    if (used != tok.size()) throw std::invalid_argument("trailing characters");
                    radii.push_back(r);
                } catch (const std::exception&) {
                    throw schwarz::ParseError("--grid-radii: bad radius '" + tok + "'");
                }
            }
            if (radii.empty()) throw schwarz::ParseError("--grid-radii: no radii given");
        }
        if (max_radius > 0.0) {
            std::vector<double> kept;
            for (double r : radii) {
                if (r <= max_radius) kept.push_back(r);
            }
            if (kept.empty()) {
                throw schwarz::ParseError("--max-radius removes every grid radius");
            }
            radii = std::move(kept);
        }
        return schwarz::GridSpec(std::move(radii), angles);
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--grid-radii", radii_text,
                        "comma-separated grid radii in (0,1); default 0.1..0.8 step 0.1");
        cmd->add_option("--grid-angles", angles, "equally spaced angles per radius (default 16)");
        cmd->add_option("--max-radius", max_radius, "drop grid radii larger than this");
    }
};

json grid_to_json(const schwarz::GridSpec& grid) {
    json radii = json::array();
    for (double r : grid.radii) radii.push_back(r);
    return json{{"radii", radii}, {"angles", grid.angles}};
}

json report_to_json(const schwarz::IdentityReport& rep) {
    return json{{"identity", rep.name},
                {"max_residual", rep.max_residual},
                {"worst_point", cjson(rep.worst_point)},
                {"tolerance", rep.tolerance},
                {"pass", rep.pass}};
}

json pair_map_to_json(const schwarz::PairLinearMap& m) {
    return json{{"m11", cjson(m.m11)}, {"m12", cjson(m.m12)}, {"m21", cjson(m.m21)},
                {"m22", cjson(m.m22)}, {"t1", cjson(m.t1)},   {"t2", cjson(m.t2)}};
}

json mobius_to_json(const schwarz::Mobius& T) {
    return json{{"a", cjson(T.a())}, {"b", cjson(T.b())}, {"c", cjson(T.c())},
                {"d", cjson(T.d())}};
}

json diagnostics_to_json(const schwarz::FieldDiagnostics& d) {
    json out{{"max_deviation", d.max_deviation}, {"worst_point", cjson(d.worst_point)}};
    if (!d.note.empty()) out["note"] = d.note;
    return out;
}

int emit_skip(const std::string& reason) {
    std::cout << json{{"skipped", true}, {"reason", reason}}.dump() << "\n";
    return 3;
}

// ---------------------------------------------------------------------------

int cmd_eval(const std::string& input, const std::string& name, const std::string& quantity,
             const GridFlags& gridflags, const std::string& format, double stencil_step) {
    const schwarz::MapDocument doc = schwarz::parse_document(read_file(input));
    const schwarz::HarmonicMap& f = doc.find(name);
    const schwarz::GridSpec grid = gridflags.build();
    const schwarz::WirtingerStencil stencil{stencil_step, schwarz::StencilScheme::central4};

    struct Row {
        complexd z;
        complexd out;
        double route_dev = 0.0;
    };
    std::vector<Row> rows;
    const bool wants_route_dev = quantity == "schwarzian";
    for (complexd z : grid.points()) {
        Row row;
        row.z = z;
        if (quantity == "value") {
            row.out = f.value(z);
        } else if (quantity == "jacobian") {
            row.out = complexd(schwarz::jacobian(f, z), 0.0);
        } else if (quantity == "dilatation") {
            row.out = schwarz::dilatation(f, z).w;
        } else if (quantity == "pre-schwarzian") {
            row.out = schwarz::pre_schwarzian_h(f, z);
        } else if (quantity == "schwarzian") {
            const complexd closed = schwarz::schwarzian_h_closed(f, z);
            const complexd pointwise = schwarz::schwarzian_h_pointwise(f, z);
            const complexd definition = schwarz::schwarzian_h_definition(f, z, stencil);
            row.out = closed;
            row.route_dev = std::max(std::abs(closed - pointwise), std::abs(closed - definition));
        } else {
            throw schwarz::ParseError(
                "unknown quantity '" + quantity +
                "' (expected value|jacobian|dilatation|pre-schwarzian|schwarzian)");
        }
        rows.push_back(row);
    }

    if (format == "csv") {
        std::printf(wants_route_dev ? "z_re,z_im,re,im,route_deviation\n" : "z_re,z_im,re,im\n");
        for (const Row& row : rows) {
            if (wants_route_dev) {
                std::printf("%.17g,%.17g,%.17g,%.17g,%.17g\n", row.z.real(), row.z.imag(),
                            row.out.real(), row.out.imag(), row.route_dev);
            } else {
                std::printf("%.17g,%.17g,%.17g,%.17g\n", row.z.real(), row.z.imag(),
                            row.out.real(), row.out.imag());
            }
        }
    } else if (format == "json") {
        json results = json::array();
        for (const Row& row : rows) {
            json r{{"z", cjson(row.z)}, {"value", cjson(row.out)}};
            if (wants_route_dev) r["route_deviation"] = row.route_dev;
            results.push_back(r);
        }
        std::cout << json{{"map", name},
                          {"quantity", quantity},
                          {"grid", grid_to_json(grid)},
                          {"results", results}}
                         .dump()
                  << "\n";
    } else {
        throw schwarz::ParseError("unknown format '" + format + "' (expected csv|json)");
    }
    return 0;
}

int cmd_check_equal(const std::string& input, const std::string& name1, const std::string& name2,
                    const GridFlags& gridflags, double tol_field, double tol_witness) {
    const schwarz::MapDocument doc = schwarz::parse_document(read_file(input));
    schwarz::EqualityOptions opts;
    opts.grid = gridflags.build();
    opts.field_tol = tol_field;
    opts.witness_tol = tol_witness;

    const schwarz::ConnectionResult res =
        schwarz::check_equal_schwarzian(doc.find(name1), doc.find(name2), opts);

    json out;
    int code = 0;
    if (const auto* ne = std::get_if<schwarz::NotEqual>(&res)) {
        out = json{{"verdict", "not_equal"}, {"diagnostics", diagnostics_to_json(ne->diagnostics)}};
        code = 1;
    } else if (const auto* eq = std::get_if<schwarz::EqualNonConstant>(&res)) {
        out = json{{"verdict", "equal_nonconstant"},
                   {"witness",
                    json{{"affine", json{{"a", cjson(eq->affine.a)},
                                         {"b", cjson(eq->affine.b)},
                                         {"c", cjson(eq->affine.c)}}},
                         {"rotation_mu", cjson(eq->rotation.mu)},
                         {"base_point", cjson(eq->base_point)}}},
                   {"residual", eq->residual},
                   {"diagnostics", diagnostics_to_json(eq->diagnostics)}};
    } else if (const auto* cf = std::get_if<schwarz::EqualConstantFamily>(&res)) {
        out = json{{"verdict", "equal_constant_family"},
                   {"witness", json{{"mobius", mobius_to_json(cf->connector)},
                                    {"alpha1", cjson(cf->alpha1)},
                                    {"alpha2", cjson(cf->alpha2)},
                                    {"gamma1", cjson(cf->gamma1)},
                                    {"gamma2", cjson(cf->gamma2)}}},
                   {"residual", cf->residual},
                   {"diagnostics", diagnostics_to_json(cf->diagnostics)}};
    }
    std::cout << out.dump() << "\n";
    return code;
}

int cmd_normalize(const std::string& input, const std::string& name, const std::string& at_text) {
    const schwarz::MapDocument doc = schwarz::parse_document(read_file(input));
    const complexd w = parse_complex_pair(at_text, "--at");
    const schwarz::NormalizationResult res = schwarz::normalize_at(doc.find(name), w);

    std::cout << json{{"map", schwarz::map_to_json(res.map)},
                      {"pair_map", pair_map_to_json(res.pair_map)},
                      {"automorphism_w", cjson(res.recentering.w)},
                      {"normalized", schwarz::is_normalized(res.map)}}
                     .dump()
              << "\n";
    return 0;
}

int cmd_verify(const std::string& input, const std::string& suite,
               const std::vector<std::string>& names, const GridFlags& gridflags,
               double tol_field) {
    const schwarz::MapDocument doc = schwarz::parse_document(read_file(input));
    schwarz::VerifyOptions vopts;
    vopts.grid = gridflags.build();
    schwarz::InvarianceOptions iopts;
    iopts.grid = vopts.grid;

    const bool pair_suite = suite != "invariance";
    if (pair_suite && names.size() != 2) {
        throw schwarz::ParseError("suite '" + suite + "' needs exactly two map names");
    }
    if (!pair_suite && names.empty()) {
        throw schwarz::ParseError("suite 'invariance' needs at least one map name");
    }

    std::vector<schwarz::IdentityReport> reports;
    json skipped = json::array();

    if (suite == "invariance") {
        for (const std::string& n : names) {
            for (auto& rep : schwarz::verify_invariance(doc.find(n), iopts)) {
                rep.name = n + ":" + rep.name;
                reports.push_back(rep);
            }
        }
    } else {
        const schwarz::HarmonicMap& f1 = doc.find(names[0]);
        const schwarz::HarmonicMap& f2 = doc.find(names[1]);

        // Pair identities presuppose equal Schwarzian fields; check rather
        // than assume, and report violations as a skip.
        const schwarz::FieldDiagnostics diag =
            schwarz::detail::compare_schwarzian_fields(f1, f2, vopts.grid);
        if (diag.max_deviation > tol_field) {
            std::ostringstream os;
            os << "maps are not Schwarzian-equal: fields deviate by " << diag.max_deviation
               << " at (" << diag.worst_point.real() << ", " << diag.worst_point.imag() << ")";
            return emit_skip(os.str());
        }

        const auto append = [&reports](std::vector<schwarz::IdentityReport> more) {
            for (auto& rep : more) reports.push_back(std::move(rep));
        };

        if (suite == "prop31") {
            append(schwarz::verify_prop31(f1, f2, vopts));
        } else if (suite == "thm33") {
            reports.push_back(
                schwarz::verify_thm33(f1, f2, schwarz::default_frozen_samples(), vopts));
        } else if (suite == "corollary") {
            append(schwarz::verify_corollary(f1, f2, vopts));
        } else if (suite == "phi") {
            reports.push_back(schwarz::verify_phi_identity(f1, f2, vopts));
        } else if (suite == "limits") {
            append(schwarz::verify_phi_lemma_limits(f1, f2, vopts));
        } else if (suite == "all") {
            for (const std::string& n : names) {
                for (auto& rep : schwarz::verify_invariance(doc.find(n), iopts)) {
                    rep.name = n + ":" + rep.name;
                    reports.push_back(rep);
                }
            }
            append(schwarz::verify_prop31(f1, f2, vopts));
            reports.push_back(
                schwarz::verify_thm33(f1, f2, schwarz::default_frozen_samples(), vopts));
            append(schwarz::verify_corollary(f1, f2, vopts));
            try {
                reports.push_back(schwarz::verify_phi_identity(f1, f2, vopts));
            } catch (const schwarz::ConstantDilatationError& e) {
                skipped.push_back(json{{"suite", "phi"}, {"reason", e.what()}});
            }
            append(schwarz::verify_phi_lemma_limits(f1, f2, vopts));
        } else {
            throw schwarz::ParseError(
                "unknown suite '" + suite +
                "' (expected invariance|prop31|thm33|corollary|phi|limits|all)");
        }
    }

    bool all_pass = true;
    json results = json::array();
    for (const auto& rep : reports) {
        results.push_back(report_to_json(rep));
        all_pass = all_pass && rep.pass;
    }
    json out{{"suite", suite}, {"results", results}, {"pass", all_pass}};
    if (!skipped.empty()) out["skipped"] = skipped;
    std::cout << out.dump() << "\n";
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"harmonic pre-Schwarzian/Schwarzian toolkit for planar harmonic maps"};
    app.require_subcommand(1);

    std::string input, name1, name2, quantity, suite, format = "csv", at_text = "0,0";
    std::vector<std::string> verify_names;
    double tol_field = schwarz::tol::field_compare;
    double tol_witness = schwarz::tol::witness_residual;
    double stencil_step = schwarz::WirtingerStencil::defaults().step;
    GridFlags grid_eval, grid_check, grid_verify;

    CLI::App* eval = app.add_subcommand("eval", "evaluate a field over a disk grid");
    eval->add_option("name", name1, "map name in the document")->required();
    eval->add_option("quantity", quantity,
                     "value|jacobian|dilatation|pre-schwarzian|schwarzian")
        ->required();
    eval->add_option("--input", input, "map document (json)")->required();
    eval->add_option("--format", format, "csv|json (default csv)");
    eval->add_option("--stencil-step", stencil_step,
                     "base step for the finite-difference route (default 1e-3)");
    grid_eval.attach(eval);

    CLI::App* check = app.add_subcommand("check-equal", "decide Schwarzian equality");
    check->add_option("name1", name1, "first map name")->required();
    check->add_option("name2", name2, "second map name")->required();
    check->add_option("--input", input, "map document (json)")->required();
    check->add_option("--tol-field", tol_field, "field comparison tolerance (default 1e-7)");
    check->add_option("--tol-witness", tol_witness, "witness residual tolerance (default 1e-8)");
    grid_check.attach(check);

    CLI::App* normalize = app.add_subcommand("normalize", "canonical normalization at a point");
    normalize->add_option("name", name1, "map name in the document")->required();
    normalize->add_option("--input", input, "map document (json)")->required();
    normalize->add_option("--at", at_text, "base point as RE,IM (default 0,0)");

    CLI::App* verify = app.add_subcommand("verify", "run identity / invariance suites");
    verify->add_option("suite", suite, "invariance|prop31|thm33|corollary|phi|limits|all")
        ->required();
    verify->add_option("names", verify_names, "one map name (invariance) or two (pair suites)")
        ->expected(1, 2);
    verify->add_option("--input", input, "map document (json)")->required();
    verify->add_option("--tol-field", tol_field,
                       "equality precondition tolerance (default 1e-7)");
    grid_verify.attach(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (eval->parsed()) {
            return cmd_eval(input, name1, quantity, grid_eval, format, stencil_step);
        }
        if (check->parsed()) {
            return cmd_check_equal(input, name1, name2, grid_check, tol_field, tol_witness);
        }
        if (normalize->parsed()) {
            return cmd_normalize(input, name1, at_text);
        }
        if (verify->parsed()) {
            return cmd_verify(input, suite, verify_names, grid_verify, tol_field);
        }
    } catch (const schwarz::NotNormalized& e) {
        return emit_skip(e.what());
    } catch (const schwarz::ConstantDilatationError& e) {
        return emit_skip(e.what());
    } catch (const schwarz::DegenerateBasePoint& e) {
        return emit_skip(e.what());
    } catch (const schwarz::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
