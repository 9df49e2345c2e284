#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "mlab/averaging.hpp"
#include "mlab/grid.hpp"
#include "mlab/product.hpp"

namespace mlab {

using nlohmann::json;

// File formats. Parsers throw std::invalid_argument naming the bad field.
//   weight-v1   : {"format","resolution","values"}
//   family-v1   : {"format","resolution","mask","weights"}
//   weight2d-v1 : {"format","resolution","values" (nested rows)}
//   family2d-v1 : {"format","resolution","mask","weights" (nested rows each)}
json weight_to_json(const Weight& w);
Weight weight_from_json(const json& j);

json family_to_json(const WeightFamily& fam);
WeightFamily family_from_json(const json& j);

json weight2d_to_json(const Weight2D& w);
Weight2D weight2d_from_json(const json& j);

json family2d_to_json(const WeightFamily2D& fam);
WeightFamily2D family2d_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

// All requested constants of one weight, keyed like "A_2", "A_inf^d",
// "RH_3", "doubling", "BMO_2", "C5_2", ... ("^d" marks the dyadic scope).
struct ConstantsReport {
    json weight_meta;
    std::map<std::string, double> constants;
    json conventions;
};

// p_list entries may be finite (> 1) or infinity; 1 and infinity are always
// included. scopes: bitmask-free pair of flags for the two scopes.
ConstantsReport compute_constants(const Weight& w, const std::vector<double>& p_list,
                                  bool grid_scope, bool dyadic_scope);
json constants_report_to_json(const ConstantsReport& report);

// Haar expansion of log w: {"mean": ..., "levels": [[...], ...]}.
json haar_block(const Weight& w);

// Relation reports serialize as a list of {relation, lhs, rhs, pass, slack}.
struct RelationReport;  // mlab/oscillation.hpp
json relation_report_to_json(const RelationReport& report);

// One verification check: status "pass" | "fail" | "reported".
struct CheckResult {
    std::string id;
    std::string anchor;
    std::string status;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double runtime_ms = 0.0;
};

struct VerifyReport {
    std::string suite;
    std::uint64_t seed = 0;
    int n = 0;
    std::vector<CheckResult> checks;
    double runtime_ms = 0.0;

    bool all_pass() const;
    void add(CheckResult c);
};

json verify_report_to_json(const VerifyReport& report);

// Structural validation of the verify-report-v1 schema; returns problems
// (empty means valid).
std::vector<std::string> validate_verify_report(const json& j);

// Resolution-sweep curves for plotting: one row per (series, n, value).
struct CurvePoint {
    std::string suite;
    std::string series;
    int n = 0;
    double value = 0.0;
};

void write_curves_csv(const std::string& path, const std::vector<CurvePoint>& points);

std::string format_p(double p);  // "1.5", "2", "inf", ...

}  // namespace mlab
