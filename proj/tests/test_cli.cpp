#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "mlab/report.hpp"

using mlab::json;

namespace {

const std::string cli = MLAB_CLI_PATH;

int run(const std::string& args) {
    const int status = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct TempDir {
    std::string path;
    TempDir() {
        char tmpl[] = "/tmp/mlab_cli_XXXXXX";
        path = mkdtemp(tmpl);
    }
    std::string file(const std::string& name) const { return path + "/" + name; }
};

}  // namespace

TEST_CASE("gen writes deterministic weight files") {
    TempDir dir;
    const std::string out1 = dir.file("a.json");
    const std::string out2 = dir.file("b.json");
    REQUIRE(run("gen cascade --n 6 --delta 0.3 --seed 42 -o " + out1) == 0);
    REQUIRE(run("gen cascade --n 6 --delta 0.3 --seed 42 -o " + out2) == 0);
    CHECK(slurp(out1) == slurp(out2));  // byte identical
    const json j = mlab::read_json_file(out1);
    CHECK(j["format"] == "weight-v1");
    CHECK(j["resolution"] == 6);
    CHECK(j["values"].size() == 64);

    REQUIRE(run("gen seam --n 6 --a 0.5 -o " + dir.file("seam.json")) == 0);
    REQUIRE(run("gen paper-log --n 6 --model rhinf -o " + dir.file("rh.json")) == 0);
    REQUIRE(run("gen random-family --n 4 --delta 0.2 --seed 3 -o " + dir.file("fam.json")) == 0);
    REQUIRE(run("gen cascade-2d --n 3 --delta 0.2 --seed 3 -o " + dir.file("w2.json")) == 0);
    REQUIRE(run("gen smooth --n 6 --cos 0.5 --sin 0.25 -o " + dir.file("smooth.json")) == 0);
    CHECK(mlab::read_json_file(dir.file("fam.json"))["format"] == "family-v1");
    CHECK(mlab::read_json_file(dir.file("w2.json"))["format"] == "weight2d-v1");

    CHECK(run("gen nonsense --n 4 -o " + dir.file("x.json")) == 2);
    CHECK(run("gen cascade --n 6 --delta 1.5 -o " + dir.file("x.json")) == 2);
    CHECK(run("gen smooth --n 6 --cos 9 -o " + dir.file("x.json")) == 2);
}

TEST_CASE("constants computes the documented values and exit codes") {
    TempDir dir;
    const std::string wfile = dir.file("w13.json");
    mlab::write_json_file(wfile, json{{"format", "weight-v1"},
                                      {"resolution", 1},
                                      {"values", {1.0, 3.0}}});
    const std::string out = dir.file("constants.json");
    REQUIRE(run("constants " + wfile + " --p 2 --scope dyadic -o " + out) == 0);
    const json rep = mlab::read_json_file(out);
    CHECK(rep["constants"]["A_2^d"].get<double>() == doctest::Approx(4.0 / 3.0));
    CHECK(rep["constants"]["RH_inf^d"].get<double>() == doctest::Approx(4.0));
    CHECK(rep["constants"]["doubling^d"].get<double>() == doctest::Approx(4.0));

    // constant weight: every A/RH entry is 1, BMO is 0
    const std::string cfile = dir.file("const.json");
    mlab::write_json_file(cfile, json{{"format", "weight-v1"},
                                      {"resolution", 2},
                                      {"values", {2.0, 2.0, 2.0, 2.0}}});
    REQUIRE(run("constants " + cfile + " --scope both -o " + out) == 0);
    const json crep = mlab::read_json_file(out);
    for (const auto& [key, value] : crep["constants"].items()) {
        const bool dyadic = key.size() >= 2 && key.substr(key.size() - 2) == "^d";
        if (key.rfind("A_", 0) == 0) CHECK(value.get<double>() == doctest::Approx(1.0));
        // the dyadic RH constant keeps the doubling clause, which is 2 even
        // for a constant weight
        if (key.rfind("RH_", 0) == 0)
            CHECK(value.get<double>() == doctest::Approx(dyadic ? 2.0 : 1.0));
        if (key.rfind("BMO", 0) == 0) CHECK(value.get<double>() == doctest::Approx(0.0));
    }

    // optional blocks: haar expansion of log w and the relation reports
    REQUIRE(run("constants " + wfile + " --p 2 --scope both --haar --crosscheck -o " + out) ==
            0);
    const json full = mlab::read_json_file(out);
    CHECK(full["haar"]["levels"].size() == 1);
    CHECK(full["haar"]["mean"].get<double>() == doctest::Approx(0.5 * std::log(3.0)));
    REQUIRE(full["crosscheck"].size() == 2);  // p = 2 at both scopes
    for (const auto& block : full["crosscheck"]) {
        CHECK(block["all_pass"] == true);
        for (const auto& rel : block["relations"]) {
            CHECK(rel.contains("relation"));
            CHECK(rel.contains("lhs"));
            CHECK(rel.contains("rhs"));
            CHECK(rel.contains("pass"));
            CHECK(rel.contains("slack"));
        }
    }

    CHECK(run("constants /nonexistent.json") == 2);
    // malformed file: missing values
    const std::string bad = dir.file("bad.json");
    mlab::write_json_file(bad, json{{"format", "weight-v1"}, {"resolution", 1}});
    CHECK(run("constants " + bad) == 2);
    CHECK(run("constants " + wfile + " --scope sideways") == 2);
}

TEST_CASE("average reproduces translate families and honors masks") {
    TempDir dir;
    const std::string wfile = dir.file("w.json");
    REQUIRE(run("gen cascade --n 4 --delta 0.4 --seed 9 -o " + wfile) == 0);
    const std::string famfile = dir.file("fam.json");
    REQUIRE(run("gen translate --input " + wfile + " -o " + famfile) == 0);

    const std::string gafile = dir.file("ga.json");
    REQUIRE(run("average " + famfile + " --mode ga -o " + gafile) == 0);
    const mlab::Weight w = mlab::weight_from_json(mlab::read_json_file(wfile));
    const mlab::Weight ga = mlab::weight_from_json(mlab::read_json_file(gafile));
    for (std::size_t i = 0; i < w.values.size(); ++i)
        CHECK(ga.values[i] == doctest::Approx(w.values[i]).epsilon(1e-12));

    const json prov = mlab::read_json_file(gafile)["provenance"];
    CHECK(prov["mode"] == "ga");
    CHECK(prov["mask_count"] == 16);
    CHECK(prov["normalization"].contains("grand_factor"));

    const std::string arithfile = dir.file("arith.json");
    REQUIRE(run("average " + famfile + " --mode arith -o " + arithfile) == 0);
    const mlab::Weight arith = mlab::weight_from_json(mlab::read_json_file(arithfile));
    for (std::size_t i = 0; i < w.values.size(); ++i)
        CHECK(arith.values[i] == doctest::Approx(w.values[i]).epsilon(1e-12));

    // singleton mask picks out a shifted member slice
    const std::string single = dir.file("single.json");
    REQUIRE(run("average " + famfile + " --mode ga --mask 3 -o " + single) == 0);
    const json sj = mlab::read_json_file(single);
    CHECK(sj["provenance"]["mask_count"] == 1);

    CHECK(run("average " + famfile + " --mode sideways -o " + single) == 2);
    CHECK(run("average " + famfile + " --mask 99 -o " + single) == 2);
    CHECK(run("average /nonexistent.json") == 2);
}

TEST_CASE("verify writes a schema-valid report, curves, and exit codes") {
    TempDir dir;
    const std::string report = dir.file("report.json");
    const std::string csv = dir.file("curves.csv");
    REQUIRE(run("verify --suite haar --seed 1 --n 8 -o " + report + " --csv " + csv) == 0);
    const json j = mlab::read_json_file(report);
    CHECK(mlab::validate_verify_report(j).empty());
    CHECK(j["suite"] == "haar");
    CHECK(j["all_pass"] == true);
    std::ifstream csv_in(csv);
    std::string header;
    std::getline(csv_in, header);
    CHECK(header == "suite,series,n,value");

    CHECK(run("verify --suite nonsense -o " + report) == 2);
}

TEST_CASE("flag parse errors are setup errors, help is not") {
    CHECK(run("gen") == 2);                  // missing required positional
    CHECK(run("constants") == 2);
    CHECK(run("gen cascade --n notanumber") == 2);
    CHECK(run("--help") == 0);
    CHECK(run("") == 2);                     // a subcommand is required
}
