#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mlab/report.hpp"

namespace mlab {

struct SuiteOptions {
    std::uint64_t seed = 1;
    int n = 0;  // 0 = per-suite default resolution
};

struct SuiteRun {
    VerifyReport report;
    std::vector<CurvePoint> curves;
};

// Suites: lemma35, haar, averaging-ap, averaging-rhp, doubling-translation,
// product, boundary-examples, all. Throws std::invalid_argument for an
// unknown name.
SuiteRun run_suite(const std::string& name, const SuiteOptions& opts);

std::vector<std::string> suite_names();

}  // namespace mlab
