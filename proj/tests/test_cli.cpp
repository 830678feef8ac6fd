#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <sys/wait.h>
#include <vector>

// End-to-end tests that drive the installed binary the way a user would.

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string("'") + SCHWARZ_CLI_PATH + "' " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) {
        res.out.append(buf, n);
    }
    const int status = pclose(pipe);
    REQUIRE(WIFEXITED(status));
    res.code = WEXITSTATUS(status);
    return res;
}

std::string corpus(const std::string& file) {
    return std::string("--input '") + SCHWARZ_CORPUS_DIR + "/" + file + "'";
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::vector<double> csv_fields(const std::string& line) {
    std::vector<double> fields;
    std::size_t start = 0;
    while (start <= line.size()) {
        const std::size_t comma = line.find(',', start);
        const std::string tok = line.substr(start, comma - start);
        fields.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return fields;
}

} // namespace

TEST_CASE("eval emits csv") {
    const RunResult res = run_cli("eval cubic value " + corpus("analytic.json"));
    REQUIRE(res.code == 0);
    const auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 1 + 8 * 16); // header + default grid
    REQUIRE(lines[0] == "z_re,z_im,re,im");
    // First grid point is r = 0.1 at angle 0; h = z + 0.1 z^3, g = 0.
    const std::vector<double> first = csv_fields(lines[1]);
    REQUIRE(first.size() == 4);
    REQUIRE(std::abs(first[0] - 0.1) < 1e-15);
    REQUIRE(std::abs(first[1]) < 1e-15);
    REQUIRE(std::abs(first[2] - 0.1001) < 1e-15);
    REQUIRE(std::abs(first[3]) < 1e-15);
}

TEST_CASE("eval schwarzian csv carries the route deviation column") {
    const RunResult res = run_cli("eval polyharmonic_one schwarzian " + corpus("omega_z.json") +
                                  " --grid-radii 0.2,0.4 --grid-angles 4");
    REQUIRE(res.code == 0);
    const auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 1 + 2 * 4);
    REQUIRE(lines[0] == "z_re,z_im,re,im,route_deviation");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        // Five comma-separated fields, and the deviation is small.
        const auto last_comma = lines[i].rfind(',');
        const double dev = std::stod(lines[i].substr(last_comma + 1));
        REQUIRE(dev < 1e-5);
    }
}

TEST_CASE("eval emits json") {
    const RunResult res = run_cli("eval polyharmonic_one dilatation " + corpus("omega_z.json") +
                                  " --format json --grid-radii 0.3 --grid-angles 8");
    REQUIRE(res.code == 0);
    const nlohmann::json out = nlohmann::json::parse(res.out);
    REQUIRE(out["map"] == "polyharmonic_one");
    REQUIRE(out["quantity"] == "dilatation");
    REQUIRE(out["grid"]["angles"] == 8);
    REQUIRE(out["results"].size() == 8);
    // omega = z, so the first sample (angle 0, r = 0.3) has value 0.3.
    const auto v = out["results"][0]["value"];
    REQUIRE(std::abs(v[0].get<double>() - 0.3) < 1e-12);
    REQUIRE(std::abs(v[1].get<double>()) < 1e-12);
}

TEST_CASE("eval respects --max-radius") {
    const RunResult res = run_cli("eval identity value " + corpus("analytic.json") +
                                  " --max-radius 0.35 --grid-angles 4");
    REQUIRE(res.code == 0);
    // Default radii 0.1..0.8 filtered to {0.1, 0.2, 0.3}.
    REQUIRE(lines_of(res.out).size() == 1 + 3 * 4);
}

TEST_CASE("check-equal: equal pair with witness") {
    const RunResult res =
        run_cli("check-equal wp_base wp_image " + corpus("witness_pair.json"));
    REQUIRE(res.code == 0);
    const nlohmann::json out = nlohmann::json::parse(res.out);
    REQUIRE(out["verdict"] == "equal_nonconstant");
    REQUIRE(std::abs(out["witness"]["affine"]["a"][0].get<double>() - 0.1) < 1e-8);
    REQUIRE(std::abs(out["witness"]["affine"]["a"][1].get<double>() - 0.05) < 1e-8);
    REQUIRE(out["residual"].get<double>() < 1e-8);
}

TEST_CASE("check-equal: unequal pair") {
    const RunResult res = run_cli("check-equal plain stretched " + corpus("unequal_pair.json"));
    REQUIRE(res.code == 1);
    const nlohmann::json out = nlohmann::json::parse(res.out);
    REQUIRE(out["verdict"] == "not_equal");
    REQUIRE(out["diagnostics"]["max_deviation"].get<double>() > 1e-7);
}

TEST_CASE("check-equal: constant dilatation family") {
    const RunResult res =
        run_cli("check-equal const_one const_two " + corpus("const_family.json"));
    REQUIRE(res.code == 0);
    const nlohmann::json out = nlohmann::json::parse(res.out);
    REQUIRE(out["verdict"] == "equal_constant_family");
    REQUIRE(std::abs(out["witness"]["alpha1"][0].get<double>() - 0.3) < 1e-10);
    REQUIRE(std::abs(out["witness"]["alpha2"][0].get<double>() - 0.15) < 1e-10);
}

TEST_CASE("normalize produces a normalized map") {
    const RunResult res =
        run_cli("normalize polyharmonic_shifted " + corpus("omega_z.json") + " --at 0.3,0");
    REQUIRE(res.code == 0);
    const nlohmann::json out = nlohmann::json::parse(res.out);
    REQUIRE(out["normalized"] == true);
    REQUIRE(std::abs(out["automorphism_w"][0].get<double>() - 0.3) < 1e-15);
    REQUIRE(out["map"].contains("g"));
    REQUIRE(out["map"].contains("h"));
}

TEST_CASE("normalize at a degenerate base point is a skip") {
    const RunResult res =
        run_cli("normalize omega_quadratic " + corpus("omega_sq.json") + " --at 0,0");
    REQUIRE(res.code == 3);
    const nlohmann::json out = nlohmann::json::parse(res.out);
    REQUIRE(out["skipped"] == true);
    REQUIRE_FALSE(out["reason"].get<std::string>().empty());
}

TEST_CASE("verify all on a normalized equal pair") {
    const RunResult res = run_cli("verify all np_one np_two " + corpus("normalized_pair.json"));
    REQUIRE(res.code == 0);
    const nlohmann::json out = nlohmann::json::parse(res.out);
    REQUIRE(out["suite"] == "all");
    REQUIRE(out["pass"] == true);
    REQUIRE(out["results"].size() >= 10);
    for (const auto& rep : out["results"]) {
        INFO(rep["identity"].get<std::string>());
        REQUIRE(rep["pass"] == true);
    }
}

TEST_CASE("verify invariance on a single map") {
    const RunResult res = run_cli("verify invariance warp " + corpus("expressions.json"));
    REQUIRE(res.code == 0);
    const nlohmann::json out = nlohmann::json::parse(res.out);
    REQUIRE(out["pass"] == true);
    REQUIRE(out["results"].size() == 4);
    REQUIRE(out["results"][0]["identity"].get<std::string>().rfind("warp:", 0) == 0);
}

TEST_CASE("verify pair suites skip when the fields differ") {
    const RunResult res = run_cli("verify prop31 plain stretched " + corpus("unequal_pair.json"));
    REQUIRE(res.code == 3);
    const nlohmann::json out = nlohmann::json::parse(res.out);
    REQUIRE(out["skipped"] == true);
    REQUIRE(out["reason"].get<std::string>().find("not Schwarzian-equal") != std::string::npos);
}

TEST_CASE("verify pair suites skip on non-normalized maps") {
    const RunResult res =
        run_cli("verify phi const_one const_two " + corpus("const_family.json"));
    REQUIRE(res.code == 3);
    const nlohmann::json out = nlohmann::json::parse(res.out);
    REQUIRE(out["skipped"] == true);
}

TEST_CASE("input and usage errors exit with 2") {
    REQUIRE(run_cli("eval no_such_map value " + corpus("analytic.json")).code == 2);
    REQUIRE(run_cli("eval cubic no_such_quantity " + corpus("analytic.json")).code == 2);
    REQUIRE(run_cli("eval cubic value --input /nonexistent.json").code == 2);
    REQUIRE(run_cli("eval cubic value").code == 2);              // missing --input
    REQUIRE(run_cli("verify prop31 cubic " + corpus("analytic.json")).code == 2); // one name
    REQUIRE(run_cli("frobnicate").code == 2);                    // unknown subcommand
    REQUIRE(run_cli("eval cubic value " + corpus("analytic.json") + " --grid-radii nope").code ==
            2);
}

TEST_CASE("help exits cleanly") {
    const RunResult res = run_cli("--help");
    REQUIRE(res.code == 0);
    REQUIRE(res.out.find("eval") != std::string::npos);
    REQUIRE(res.out.find("check-equal") != std::string::npos);
}
