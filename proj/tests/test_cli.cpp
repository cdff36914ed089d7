#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "freeholo/json_io.hpp"
#include "freeholo/polyparse.hpp"

using namespace freeholo;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(FREEHOLO_FIXTURES) + "/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "freeholo_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

/// A sampled diag_ball point written to the scratch directory.
std::string point_fixture() {
    const fs::path point = scratch("diag_ball_point.json");
    const Run s = run({"sample", "--delta", fixture("diag_ball_delta.json"), "--seed", "2", "--n", "2"});
    std::ofstream(point) << json::parse(s.out)["points"][0].dump();
    return point.string();
}

}  // namespace

TEST_CASE("eval") {
    const Run r = run({"eval", "--delta", fixture("toy_delta.json"), "--colligation", fixture("toy_colligation.json"),
                       "--point", fixture("toy_point.json"), "--neumann", "20"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    const json input = read_json_file(fixture("toy_point.json"));
    CHECK(j["value"]["re"] == input["parts"][0]["re"]);
    CHECK(j["value"]["im"] == input["parts"][0]["im"]);
    CHECK(j["membership"]["member"] == true);

    const PolyMatrix delta = parse_delta(read_json_file(fixture("toy_delta.json")));
    const RealizedFunction f(colligation_from_json(read_json_file(fixture("toy_colligation.json"))), delta);
    const NeumannReport lib = eval_neumann(f, tuple_from_json(input), 20);
    CHECK(j["neumann"] == neumann_to_json(lib));
    CHECK(j["neumann"].contains("tail_bound"));

    const Run out = run({"eval", "--delta", fixture("toy_delta.json"), "--colligation", fixture("toy_colligation.json"),
                         "--point", fixture("toy_point_outside.json")});
    CHECK(out.code == 2);

    const fs::path report = scratch("eval.json");
    const Run plotted = run({"eval", "--delta", fixture("diag_ball_delta.json"), "--colligation",
                             fixture("diag_ball_colligation.json"), "--point", point_fixture(), "--neumann", "10",
                             "--output", report.string(), "--plot-data"});
    REQUIRE(plotted.code == 0);
    const std::string csv = slurp(report.string() + ".plot.csv");
    CHECK(csv.find("neumann_error,10,") != std::string::npos);
    CHECK(csv.find("neumann_tail_bound,1,") != std::string::npos);
    CHECK(out.out.empty());
    CHECK(out.err.find("1.5") != std::string::npos);
}

TEST_CASE("usage and fixture errors") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"eval", "--delta", "/no/such/file.json"}).code == 1);
    CHECK(run({"sample", "--delta", fixture("diag_ball_delta.json")}).code == 1);
    CHECK(run({"eval", "--delta", fixture("diag_ball_delta.json"), "--colligation", fixture("toy_colligation.json"),
               "--point", fixture("toy_point.json")})
              .code == 1);
    CHECK(run({"proptest", "--delta", fixture("diag_ball_delta.json"), "--seed", "1", "--tol", "-1"}).code == 1);
    const Run bad = run({"parse", "--expr", "x1 + (x2"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("column") != std::string::npos);
}

TEST_CASE("parse") {
    const Run r = run({"parse", "--expr", "x1x2-x2x1"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["canonical"] == "x1*x2 - x2*x1");
    const Run v = run({"parse", "--expr", "x1", "--vars", "3"});
    CHECK(json::parse(v.out)["poly"]["nvars"] == 3);
}

TEST_CASE("sample") {
    const std::vector<std::string> args{"sample", "--delta", fixture("row_ball_delta.json"), "--seed", "5", "--n", "3",
                                        "--count", "4", "--shrink", "0.8"};
    const Run a = run(args);
    const Run b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const json j = json::parse(a.out);
    REQUIRE(j["points"].size() == 4);
    const PolyMatrix delta = parse_delta(read_json_file(fixture("row_ball_delta.json")));
    for (const auto& p : j["points"]) {
        const MatrixTuple x = tuple_from_json(p);
        CHECK(is_member(delta, x).member);
        CHECK(p["delta_norm"].get<double>() == doctest::Approx(0.8).epsilon(1e-6));
    }
}

TEST_CASE("sampling an empty matrix domain") {
    const Run r = run({"sample", "--delta", fixture("commutator_delta.json"), "--seed", "1", "--n", "2"});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("||delta(0)|| = 1") != std::string::npos);
}

TEST_CASE("expand") {
    const Run r = run({"expand", "--delta", fixture("diag_ball_delta.json"), "--colligation",
                       fixture("diag_ball_colligation.json"), "--degree", "3"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["K"] == 3);
    CHECK(j["components"].size() == 4);
    CHECK(j["M"].is_null());

    const Run c = run({"expand", "--delta", fixture("diag_ball_delta.json"), "--colligation",
                       fixture("diag_ball_colligation.json"), "--degree", "6", "--point", point_fixture()});
    REQUIRE(c.code == 0);
    const json k = json::parse(c.out);
    CHECK(k["cauchy"]["pass"] == true);
    CHECK(k["M"].is_number());
    CHECK(k["r"].get<double>() > 1.0);
}

TEST_CASE("proptest") {
    const std::vector<std::string> args{"proptest", "--delta", fixture("diag_ball_delta.json"), "--colligation",
                                        fixture("diag_ball_colligation.json"), "--seed", "3", "--trials", "20",
                                        "--balanced-certified"};
    const Run a = run(args);
    REQUIRE(a.code == 0);
    const json j = json::parse(a.out);
    CHECK(j["pass"] == true);
    CHECK(j["reports"].size() == 6);
    for (const auto& rep : j["reports"]) CHECK(rep["verdict"] == "pass");
    CHECK(run(args).out == a.out);

    const Run poly = run({"proptest", "--delta", fixture("row_ball_delta.json"), "--expr", "x1 x2 - 2 x2", "--seed", "4",
                          "--trials", "10", "--suite", "intertwining", "--suite", "direct_sums"});
    CHECK(poly.code == 0);
    CHECK(json::parse(poly.out)["reports"].size() == 2);

    const Run fail = run({"proptest", "--delta", fixture("diag_ball_delta.json"), "--colligation",
                          fixture("diag_ball_colligation.json"), "--seed", "3", "--suite", "algebra_membership", "--tol",
                          "1e-300"});
    CHECK(fail.code == 4);
    CHECK(json::parse(fail.out)["pass"] == false);

    const fs::path out = scratch("report.json");
    fs::remove(out);
    fs::remove(out.string() + ".plot.csv");
    const Run plot = run({"proptest", "--delta", fixture("diag_ball_delta.json"), "--colligation",
                          fixture("diag_ball_colligation.json"), "--seed", "3", "--suite", "ssoc", "--output",
                          out.string(), "--plot-data"});
    CHECK(plot.code == 0);
    CHECK(plot.out.empty());
    CHECK(json::parse(slurp(out))["pass"] == true);
    const std::string csv = slurp(out.string() + ".plot.csv");
    CHECK(csv.rfind("series,index,value\n", 0) == 0);
    CHECK(csv.find("ssoc,7,") != std::string::npos);
    CHECK(run({"proptest", "--delta", fixture("diag_ball_delta.json"), "--colligation", fixture("diag_ball_colligation.json"),
               "--seed", "3", "--suite", "ssoc", "--plot-data"})
              .code == 1);
}
