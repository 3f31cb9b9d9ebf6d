#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;

    json doc() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "subgeom");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = subgeom::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string write_temp(const std::string& name, const json& content) {
    const fs::path p = fs::temp_directory_path() / ("subgeom_cli_" + name + ".json");
    std::ofstream(p) << content.dump();
    return p.string();
}

json plane_point(double a, double b) {
    return {{"u", {a, b}}, {"f", {a, b, 0}}, {"df", {1, 0, 0, 0, 1, 0}}, {"d2f", {0, 0, 0, 0, 0, 0, 0, 0, 0}}};
}

}  // namespace

TEST_CASE("round sphere: every record has S = 4 and H = 1") {
    const Run r = run({"invariants", "--model", "round_sphere", "--format", "json"});
    REQUIRE(r.code == 0);
    const json d = r.doc();
    CHECK(d["version"] == "1.0");
    CHECK(d["records"].size() == 8 * 8 * 8 * 8 + 100);
    for (const json& rec : d["records"]) {
        CHECK(rec["S"].get<double>() == doctest::Approx(4).epsilon(1e-12));
        CHECK(rec["H"].get<double>() == doctest::Approx(1).epsilon(1e-12));
    }
}

TEST_CASE("pinch verdicts through the command line") {
    SUBCASE("minimal Clifford torus is an equality case everywhere") {
        const Run r = run({"pinch", "--model", "clifford_torus", "--k", "2", "--json"});
        REQUIRE(r.code == 0);
        const json s = r.doc()["summary"];
        CHECK(s["equality"] == s["points"]);
    }
    SUBCASE("T4_1(0.3) violates the bound everywhere") {
        const Run r = run({"pinch", "--model", "clifford_torus", "--param", "k=1", "--param", "r=0.3", "--k", "2",
                           "--format", "json", "--grid", "3", "--random", "10"});
        REQUIRE(r.code == 0);
        const json s = r.doc()["summary"];
        CHECK(s["violated"] == s["points"]);
        CHECK(s["points"] == 81 + 10);
    }
    SUBCASE("missing --k is a usage error") {
        const Run r = run({"pinch", "--model", "clifford_torus"});
        CHECK(r.code == 2);
        CHECK(r.err.find("--k") != std::string::npos);
    }
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"nosuch"}).code == 2);
    CHECK(run({"verify", "--suite", "nosuch"}).code == 2);
    CHECK(run({"invariants"}).code == 2);
    CHECK(run({"invariants", "--model", "no_model"}).code == 2);
    CHECK(run({"invariants", "--model", "round_sphere", "--format", "xml"}).code == 2);
    CHECK(run({"invariants", "--model", "round_sphere", "--param", "n"}).code == 2);
    const std::string jet = write_temp("plane", {{"n", 2}, {"N", 3}, {"c", 0}, {"points", {plane_point(0, 0)}}});
    CHECK(run({"invariants", "--model", "round_sphere", "--jet-file", jet}).code == 2);
    CHECK(run({"invariants", "--jet-file", "/nonexistent/jets.json"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("JSON reports parse back and repeat byte for byte") {
    const std::vector<std::string> args = {"bw", "--model", "cp2_veronese", "--grid", "2", "--random", "7", "--seed", "3",
                                           "--format", "json"};
    const Run a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(json::parse(a.out).dump(2) + "\n" == a.out);

    std::vector<std::string> serial = args;
    serial.push_back("--serial");
    CHECK(run(serial).out == a.out);

    const std::vector<std::string> iso = {"isotropic-min", "--model", "clifford_torus", "--grid", "1", "--random", "3",
                                          "--samples", "20", "--seed", "5", "--json"};
    CHECK(run(iso).out == run(iso).out);
}

TEST_CASE("jet-file input") {
    SUBCASE("flat plane gives zeros") {
        const std::string path =
            write_temp("plane2", {{"n", 2}, {"N", 3}, {"c", 0}, {"points", {plane_point(0, 0), plane_point(1, -1)}}});
        const Run r = run({"invariants", "--jet-file", path, "--format", "json"});
        REQUIRE(r.code == 0);
        for (const json& rec : r.doc()["records"]) {
            CHECK(rec["S"] == 0.0);
            CHECK(rec["H"] == 0.0);
            CHECK(rec["nullity_dim"] == 2);
        }
    }
    SUBCASE("asymmetric second derivatives are a schema error") {
        json p = plane_point(0, 0);
        p["d2f"] = {0, 0, 1, 0, 0, 0.5, 0, 0, 0, 0, 0, 1};
        const std::string path = write_temp("asym", {{"n", 2}, {"N", 3}, {"c", 0}, {"points", {p}}});
        const Run r = run({"invariants", "--jet-file", path});
        CHECK(r.code == 2);
        CHECK(r.err.find("symmetric") != std::string::npos);
    }
}

TEST_CASE("config file fills flags and flags win") {
    const std::string cfg = write_temp("config", {{"model", "clifford_torus"},
                                                  {"params", {{"k", 1}, {"r", 0.3}}},
                                                  {"k", 2},
                                                  {"grid", 1},
                                                  {"random", 2},
                                                  {"format", "json"}});
    const Run r = run({"pinch", "--config", cfg});
    REQUIRE(r.code == 0);
    CHECK(r.doc()["summary"]["violated"] == 3);
    const Run over = run({"pinch", "--config", cfg, "--param", "r=0.6", "--random", "4"});
    REQUIRE(over.code == 0);
    CHECK(over.doc()["summary"]["strict"] == 5);

    CHECK(run({"pinch", "--config", write_temp("badkey", {{"colour", "red"}})}).code == 2);
}

TEST_CASE("csv and table output") {
    const Run csv = run({"pinch", "--model", "round_sphere", "--k", "2", "--grid", "1", "--random", "2", "--format", "csv"});
    REQUIRE(csv.code == 0);
    std::istringstream lines(csv.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "index,S,H,bound,slack,verdict");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    CHECK(rows == 3);

    const Run table = run({"catalog", "list"});
    CHECK(table.code == 0);
    CHECK(table.out.find("product_with_curve") != std::string::npos);
    CHECK(run({"catalog", "list", "--json"}).doc()["records"].size() == 8);
}

TEST_CASE("per-point failures exit with 1") {
    const Run r = run({"adapt-frame", "--model", "round_sphere", "--grid", "1", "--random", "0", "--json"});
    CHECK(r.code == 1);
    CHECK(r.doc()["records"][0].contains("error"));
    CHECK(run({"dupin", "--model", "round_sphere", "--grid", "1", "--random", "0"}).code == 1);
    CHECK(run({"adapt-frame", "--model", "clifford_torus", "--grid", "1", "--random", "1"}).code == 0);
}

TEST_CASE("remaining analysis commands") {
    const Run ls = run({"ls-min", "--model", "clifford_torus", "--grid", "1", "--random", "1", "--json"});
    REQUIRE(ls.code == 0);
    CHECK(std::abs(ls.doc()["summary"]["max_value"].get<double>()) < 1e-6);

    const Run ov = run({"ovaloid", "--model", "round_sphere", "--grid", "2", "--random", "0", "--json"});
    REQUIRE(ov.code == 0);
    CHECK(ov.doc()["summary"]["condition_holds"] == true);

    const Run rot = run({"rotational", "--profile", "sqrt(1-x^2)", "--interval", "-0.5", "0.5", "--grid", "5", "--json"});
    REQUIRE(rot.code == 0);
    CHECK(rot.doc()["summary"]["disagreements"] == 0);
    CHECK(rot.doc()["records"].size() == 5);
    CHECK(run({"rotational", "--profile", "1+x", "--n", "4"}).code == 2);

    const Run prod = run({"product-with-curve", "--curve", "sqrt(1/3)*cos(t);sqrt(1/3)*sin(t)", "--interval", "0",
                          "6.283185307179586", "--model", "round_sphere", "--param", "n=3", "--grid", "1", "--random",
                          "3", "--json"});
    REQUIRE(prod.code == 0);
    CHECK(prod.doc()["summary"]["feasible"] == true);
    CHECK(prod.doc()["summary"]["violated"] == 0);
}

TEST_CASE("verify runs suites and reports failures through the exit code") {
    const Run r = run({"verify", "--suite", "equality-cases", "--json"});
    CHECK(r.code == 0);
    CHECK(r.doc()["records"][0]["passed"] == true);
}

TEST_CASE("verify propu at 10^4 samples") {
    const Run r = run({"verify", "--suite", "propu", "--count", "10000", "--seed", "7", "--json"});
    CHECK(r.code == 0);
    CHECK(r.doc()["summary"]["failed"] == 0);
}
