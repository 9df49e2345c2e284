#include "mlab/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mlab/constants.hpp"
#include "mlab/haar.hpp"
#include "mlab/oscillation.hpp"

namespace mlab {

namespace {

void require_field(const json& j, const char* field, const char* where) {
    if (!j.contains(field))
        throw std::invalid_argument(std::string(where) + ": missing field \"" + field + "\"");
}

int read_resolution(const json& j, const char* where) {
    require_field(j, "resolution", where);
    if (!j["resolution"].is_number_integer())
        throw std::invalid_argument(std::string(where) + ": field \"resolution\" must be an integer");
    return j["resolution"].get<int>();
}

void require_format(const json& j, const char* tag, const char* where) {
    require_field(j, "format", where);
    if (j["format"] != tag)
        throw std::invalid_argument(std::string(where) + ": field \"format\" must be \"" + tag +
                                    "\"");
}

std::vector<double> read_values(const json& j, const char* field, const char* where) {
    require_field(j, field, where);
    if (!j[field].is_array())
        throw std::invalid_argument(std::string(where) + ": field \"" + field +
                                    "\" must be an array");
    std::vector<double> out;
    out.reserve(j[field].size());
    for (const auto& v : j[field]) {
        if (!v.is_number())
            throw std::invalid_argument(std::string(where) + ": field \"" + field +
                                        "\" has a non-numeric entry");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<std::uint8_t> read_mask(const json& j, std::size_t expected, const char* where) {
    require_field(j, "mask", where);
    if (!j["mask"].is_array() || j["mask"].size() != expected)
        throw std::invalid_argument(std::string(where) + ": field \"mask\" must be an array of " +
                                    std::to_string(expected) + " 0/1 entries");
    std::vector<std::uint8_t> mask;
    mask.reserve(expected);
    for (const auto& b : j["mask"]) {
        if (b.is_boolean())
            mask.push_back(b.get<bool>() ? 1 : 0);
        else if (b.is_number_integer())
            mask.push_back(b.get<int>() ? 1 : 0);
        else
            throw std::invalid_argument(std::string(where) +
                                        ": field \"mask\" has a non-boolean entry");
    }
    return mask;
}

}  // namespace

json weight_to_json(const Weight& w) {
    return json{{"format", "weight-v1"}, {"resolution", w.resolution}, {"values", w.values}};
}

Weight weight_from_json(const json& j) {
    require_format(j, "weight-v1", "weight-v1");
    const int resolution = read_resolution(j, "weight-v1");
    return make_weight(resolution, read_values(j, "values", "weight-v1"));
}

json family_to_json(const WeightFamily& fam) {
    json weights = json::array();
    for (const auto& m : fam.members) weights.push_back(m.values);
    json mask = json::array();
    for (auto b : fam.mask) mask.push_back(static_cast<int>(b));
    return json{{"format", "family-v1"},
                {"resolution", fam.resolution},
                {"mask", mask},
                {"weights", weights}};
}

WeightFamily family_from_json(const json& j) {
    require_format(j, "family-v1", "family-v1");
    const int resolution = read_resolution(j, "family-v1");
    require_field(j, "weights", "family-v1");
    if (!j["weights"].is_array())
        throw std::invalid_argument("family-v1: field \"weights\" must be an array");
    std::vector<Weight> members;
    members.reserve(j["weights"].size());
    for (const auto& row : j["weights"]) {
        if (!row.is_array())
            throw std::invalid_argument("family-v1: field \"weights\" entries must be arrays");
        members.push_back(make_weight(resolution, row.get<std::vector<double>>()));
    }
    auto mask = read_mask(j, members.size(), "family-v1");
    return make_family(std::move(members), std::move(mask));
}

json weight2d_to_json(const Weight2D& w) {
    const std::int64_t n = w.side();
    json rows = json::array();
    for (std::int64_t i = 0; i < n; ++i) {
        json row = json::array();
        for (std::int64_t j = 0; j < n; ++j) row.push_back(w.value(i, j));
        rows.push_back(std::move(row));
    }
    return json{{"format", "weight2d-v1"}, {"resolution", w.resolution}, {"values", rows}};
}

Weight2D weight2d_from_json(const json& j) {
    require_format(j, "weight2d-v1", "weight2d-v1");
    const int resolution = read_resolution(j, "weight2d-v1");
    const std::int64_t n = std::int64_t{1} << resolution;
    require_field(j, "values", "weight2d-v1");
    if (!j["values"].is_array() || static_cast<std::int64_t>(j["values"].size()) != n)
        throw std::invalid_argument("weight2d-v1: field \"values\" must be an array of " +
                                    std::to_string(n) + " rows");
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(n * n));
    for (const auto& row : j["values"]) {
        if (!row.is_array() || static_cast<std::int64_t>(row.size()) != n)
            throw std::invalid_argument("weight2d-v1: field \"values\" rows must have " +
                                        std::to_string(n) + " entries");
        for (const auto& v : row) vals.push_back(v.get<double>());
    }
    return make_weight_2d(resolution, std::move(vals));
}

json family2d_to_json(const WeightFamily2D& fam) {
    json weights = json::array();
    for (const auto& m : fam.members) weights.push_back(weight2d_to_json(m)["values"]);
    json mask = json::array();
    for (auto b : fam.mask) mask.push_back(static_cast<int>(b));
    return json{{"format", "family2d-v1"},
                {"resolution", fam.resolution},
                {"mask", mask},
                {"weights", weights}};
}

WeightFamily2D family2d_from_json(const json& j) {
    require_format(j, "family2d-v1", "family2d-v1");
    const int resolution = read_resolution(j, "family2d-v1");
    require_field(j, "weights", "family2d-v1");
    if (!j["weights"].is_array())
        throw std::invalid_argument("family2d-v1: field \"weights\" must be an array");
    std::vector<Weight2D> members;
    members.reserve(j["weights"].size());
    for (const auto& entry : j["weights"]) {
        json wrapped{{"format", "weight2d-v1"}, {"resolution", resolution}, {"values", entry}};
        members.push_back(weight2d_from_json(wrapped));
    }
    auto mask = read_mask(j, members.size(), "family2d-v1");
    return make_family_2d(std::move(members), std::move(mask));
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

std::string format_p(double p) {
    if (std::isinf(p)) return "inf";
    std::ostringstream os;
    os << p;
    return os.str();
}

ConstantsReport compute_constants(const Weight& w, const std::vector<double>& p_list,
                                  bool grid_scope, bool dyadic_scope) {
    ConstantsReport report;
    report.weight_meta = json{{"resolution", w.resolution}, {"cells", w.cells()}};
    report.conventions = json{
        {"arcs", "suprema over grid-aligned arcs (wrap-around included); lower bounds for "
                 "the suprema over all intervals"},
        {"essential_bounds", "essinf/esssup over an arc are min/max of cell values"},
        {"dyadic_rh", "RH^d is the larger of the dyadic sup and the dyadic doubling constant"},
    };

    std::vector<double> ps{1.0, infinite_p};
    for (double p : p_list)
        if (p > 1.0 && !std::isinf(p)) ps.push_back(p);

    auto run_scope = [&](Scope scope, const std::string& suffix) {
        auto& c = report.constants;
        for (double p : ps) c["A_" + format_p(p) + suffix] = ap_constant(w, p, scope);
        for (double p : ps)
            if (p > 1.0) c["RH_" + format_p(p) + suffix] = rhp_constant(w, p, scope);
        if (w.resolution >= 1) c["doubling" + suffix] = doubling_constant(w, scope);
        const GridFn lw = log_values(w);
        c["BMO" + suffix] = bmo_norm(lw, scope, 1);
        c["BMO_2" + suffix] = bmo_norm(lw, scope, 2);
        c["C1" + suffix] = osc_constant(w, {OscTag::C1, 0.0}, scope);
        c["C3" + suffix] = osc_constant(w, {OscTag::C3, 0.0}, scope);
        c["C4" + suffix] = osc_constant(w, {OscTag::C4, 0.0}, scope);
        for (double p : ps) {
            if (p <= 1.0 || std::isinf(p)) continue;
            c["C2_" + format_p(p) + suffix] = osc_constant(w, {OscTag::C2, p}, scope);
            c["C5_" + format_p(p) + suffix] = osc_constant(w, {OscTag::C5, p}, scope);
        }
    };
    if (grid_scope) run_scope(Scope::GridArcs, "");
    if (dyadic_scope) run_scope(Scope::Dyadic, "^d");
    return report;
}

json constants_report_to_json(const ConstantsReport& report) {
    return json{{"format", "constants-v1"},
                {"weight_meta", report.weight_meta},
                {"constants", report.constants},
                {"conventions", report.conventions}};
}

json haar_block(const Weight& w) {
    const HaarCoeffs c = haar_analyze(log_values(w));
    json levels = json::array();
    for (const auto& level : c.levels) levels.push_back(level);
    return json{{"function", "log w"}, {"mean", c.mean}, {"levels", levels}};
}

json relation_report_to_json(const RelationReport& report) {
    json relations = json::array();
    for (const auto& r : report.relations)
        relations.push_back(json{{"relation", r.id},
                                 {"lhs", r.lhs},
                                 {"rhs", r.rhs},
                                 {"pass", r.status != "fail"},
                                 {"slack", r.slack},
                                 {"status", r.status}});
    return json{{"p", report.p},
                {"scope", report.scope == Scope::GridArcs ? "gridarcs" : "dyadic"},
                {"relations", relations},
                {"all_pass", report.all_pass}};
}

bool VerifyReport::all_pass() const {
    for (const auto& c : checks)
        if (c.status == "fail") return false;
    return true;
}

void VerifyReport::add(CheckResult c) { checks.push_back(std::move(c)); }

json verify_report_to_json(const VerifyReport& report) {
    json checks = json::array();
    for (const auto& c : report.checks) {
        checks.push_back(json{{"id", c.id},
                              {"anchor", c.anchor},
                              {"status", c.status},
                              {"lhs", c.lhs},
                              {"rhs", c.rhs},
                              {"slack", c.slack},
                              {"runtime_ms", c.runtime_ms}});
    }
    return json{{"format", "verify-report-v1"}, {"suite", report.suite},
                {"seed", report.seed},         {"n", report.n},
                {"checks", checks},            {"runtime_ms", report.runtime_ms},
                {"all_pass", report.all_pass()}};
}

std::vector<std::string> validate_verify_report(const json& j) {
    std::vector<std::string> problems;
    auto need = [&](const char* field, bool ok) {
        if (!ok) problems.push_back(std::string("bad or missing field \"") + field + "\"");
    };
    need("format", j.contains("format") && j["format"] == "verify-report-v1");
    need("suite", j.contains("suite") && j["suite"].is_string());
    need("seed", j.contains("seed") && j["seed"].is_number());
    need("n", j.contains("n") && j["n"].is_number_integer());
    need("runtime_ms", j.contains("runtime_ms") && j["runtime_ms"].is_number());
    need("all_pass", j.contains("all_pass") && j["all_pass"].is_boolean());
    if (!j.contains("checks") || !j["checks"].is_array()) {
        problems.push_back("bad or missing field \"checks\"");
        return problems;
    }
    std::size_t idx = 0;
    for (const auto& c : j["checks"]) {
        auto fail = [&](const char* what) {
            problems.push_back("check " + std::to_string(idx) + ": " + what);
        };
        if (!c.contains("id") || !c["id"].is_string()) fail("bad \"id\"");
        if (!c.contains("anchor") || !c["anchor"].is_string()) fail("bad \"anchor\"");
        if (!c.contains("status") || !c["status"].is_string() ||
            (c["status"] != "pass" && c["status"] != "fail" && c["status"] != "reported"))
            fail("bad \"status\"");
        for (const char* f : {"lhs", "rhs", "slack", "runtime_ms"})
            if (!c.contains(f) || !c[f].is_number()) fail("bad numeric field");
        ++idx;
    }
    return problems;
}

void write_curves_csv(const std::string& path, const std::vector<CurvePoint>& points) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << "suite,series,n,value\n";
    out.precision(17);
    for (const auto& p : points)
        out << p.suite << "," << p.series << "," << p.n << "," << p.value << "\n";
}

}  // namespace mlab
