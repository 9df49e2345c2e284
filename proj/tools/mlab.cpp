// mlab: weight laboratory for the dyadic grid of the circle and bidisc.
//   gen        write generated weight / family files
//   constants  compute every weight-class constant of a weight file
//   average    geometric-arithmetic or arithmetic averaging of a family file
//   verify     run a verification suite, write a report and plot curves
//
// Exit codes: 0 ok, 1 verification found failures, 2 setup/validation error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mlab/averaging.hpp"
#include "mlab/families.hpp"
#include "mlab/oscillation.hpp"
#include "mlab/report.hpp"
#include "mlab/verify.hpp"

namespace {

using mlab::json;

int cmd_gen(const std::string& kind, int n, double delta, double a, std::uint64_t seed,
            const std::string& input, const std::vector<double>& cos_coeffs,
            const std::vector<double>& sin_coeffs, const std::string& model,
            const std::string& output) {
    json out;
    json meta{{"generator", kind}, {"n", n}, {"seed", seed}};
    if (kind == "cascade") {
        out = mlab::weight_to_json(mlab::cascade_weight({n, delta, seed}));
        meta["delta"] = delta;
    } else if (kind == "seam") {
        out = mlab::weight_to_json(mlab::seam_weight(n, a));
        meta["a"] = a;
    } else if (kind == "translate") {
        if (input.empty())
            throw std::invalid_argument("gen translate: needs --input <weight file>");
        const mlab::Weight w = mlab::weight_from_json(mlab::read_json_file(input));
        out = mlab::family_to_json(mlab::translate_family(w));
        meta["input"] = input;
    } else if (kind == "smooth") {
        mlab::TrigPoly g{cos_coeffs, sin_coeffs};
        out = mlab::weight_to_json(mlab::smooth_doubling_weight(n, g));
        meta["doubling_bound"] = mlab::smooth_doubling_bound(g);
        meta["cos"] = cos_coeffs;
        meta["sin"] = sin_coeffs;
    } else if (kind == "paper-log") {
        mlab::BoundaryKind bk;
        if (model == "a1")
            bk = mlab::BoundaryKind::A1Boundary;
        else if (model == "rhinf")
            bk = mlab::BoundaryKind::RHInfBoundary;
        else
            throw std::invalid_argument("gen paper-log: --model must be a1 or rhinf");
        out = mlab::weight_to_json(mlab::boundary_log_weight(n, bk));
        meta["model"] = model;
    } else if (kind == "random-family") {
        out = mlab::family_to_json(mlab::cascade_family(n, delta, seed));
        meta["delta"] = delta;
    } else if (kind == "cascade-2d") {
        out = mlab::weight2d_to_json(mlab::cascade_weight_2d({n, delta, seed}));
        meta["delta"] = delta;
    } else {
        throw std::invalid_argument("unknown generator: " + kind);
    }
    out["meta"] = meta;
    mlab::write_json_file(output, out);
    return 0;
}

int cmd_constants(const std::string& input, const std::vector<double>& p_list,
                  const std::string& scope, bool with_haar, bool with_crosscheck,
                  const std::string& output) {
    bool grid = scope == "gridarcs" || scope == "both";
    bool dyadic = scope == "dyadic" || scope == "both";
    if (!grid && !dyadic)
        throw std::invalid_argument("--scope must be gridarcs, dyadic, or both");
    const mlab::Weight w = mlab::weight_from_json(mlab::read_json_file(input));
    mlab::ConstantsReport report = mlab::compute_constants(w, p_list, grid, dyadic);
    report.weight_meta["file"] = input;
    json j = mlab::constants_report_to_json(report);
    if (with_haar) j["haar"] = mlab::haar_block(w);
    if (with_crosscheck) {
        json blocks = json::array();
        for (double p : p_list) {
            if (!(p > 1.0) || std::isinf(p)) continue;
            if (grid)
                blocks.push_back(mlab::relation_report_to_json(
                    mlab::lemma35_crosscheck(w, p, mlab::Scope::GridArcs)));
            if (dyadic)
                blocks.push_back(mlab::relation_report_to_json(
                    mlab::lemma35_crosscheck(w, p, mlab::Scope::Dyadic)));
        }
        j["crosscheck"] = blocks;
    }
    if (output.empty())
        std::cout << j.dump(2) << "\n";
    else
        mlab::write_json_file(output, j);
    return 0;
}

int cmd_average(const std::string& input, const std::string& mode,
                const std::vector<std::int64_t>& mask_indices, const std::string& output) {
    mlab::WeightFamily fam = mlab::family_from_json(mlab::read_json_file(input));
    if (!mask_indices.empty()) {
        std::vector<std::uint8_t> mask(fam.members.size(), 0);
        for (auto i : mask_indices) {
            if (i < 0 || i >= static_cast<std::int64_t>(fam.members.size()))
                throw std::invalid_argument("--mask index out of range: " + std::to_string(i));
            mask[static_cast<std::size_t>(i)] = 1;
        }
        fam = mlab::make_family(std::move(fam.members), std::move(mask));
    }
    const auto [normalized, record] = mlab::normalize_logmean(fam);
    mlab::Weight avg{};
    if (mode == "ga")
        avg = mlab::ga_average(fam);
    else if (mode == "arith")
        avg = mlab::translation_average(fam);
    else
        throw std::invalid_argument("--mode must be ga or arith");
    json out = mlab::weight_to_json(avg);
    out["provenance"] = json{{"input", input},
                             {"mode", mode},
                             {"mask_count", mlab::mask_count(fam)},
                             {"normalization",
                              json{{"log_means", record.log_means},
                                   {"grand_factor", record.grand_factor}}}};
    mlab::write_json_file(output, out);
    return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int n, const std::string& output,
               std::string csv_path) {
    mlab::SuiteOptions opts;
    opts.seed = seed;
    opts.n = n;
    const mlab::SuiteRun run = mlab::run_suite(suite, opts);
    const json j = mlab::verify_report_to_json(run.report);
    if (output.empty())
        std::cout << j.dump(2) << "\n";
    else
        mlab::write_json_file(output, j);
    if (csv_path.empty())
        csv_path = output.empty() ? "verify_curves.csv" : output + ".curves.csv";
    mlab::write_curves_csv(csv_path, run.curves);
    int failures = 0;
    for (const auto& c : run.report.checks) {
        if (c.status == "fail") {
            ++failures;
            std::cerr << "FAIL " << c.id << " (lhs=" << c.lhs << ", rhs=" << c.rhs
                      << ", slack=" << c.slack << ")\n";
        }
    }
    std::cerr << run.report.suite << ": " << run.report.checks.size() - failures << "/"
              << run.report.checks.size() << " checks ok, "
              << run.report.runtime_ms / 1000.0 << " s\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weight laboratory on dyadic grids of the circle and bidisc"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate weight / family files");
    std::string gen_kind, gen_input, gen_model = "a1", gen_output = "out.json";
    int gen_n = 10;
    double gen_delta = 0.3, gen_a = 0.5;
    std::uint64_t gen_seed = 1;
    std::vector<double> gen_cos, gen_sin;
    gen->add_option("kind", gen_kind,
                    "cascade | seam | translate | smooth | paper-log | random-family | cascade-2d")
        ->required();
    gen->add_option("--n", gen_n, "grid resolution N (2^N cells)");
    gen->add_option("--delta", gen_delta, "cascade multiplier bound");
    gen->add_option("--a", gen_a, "seam multiplier");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--input", gen_input, "input weight file (translate)");
    gen->add_option("--cos", gen_cos, "cosine coefficients (smooth)");
    gen->add_option("--sin", gen_sin, "sine coefficients (smooth)");
    gen->add_option("--model", gen_model, "a1 | rhinf (paper-log)");
    gen->add_option("-o,--output", gen_output, "output file");

    // constants
    auto* constants = app.add_subcommand("constants", "compute weight-class constants");
    std::string con_input, con_scope = "both", con_output;
    std::vector<double> con_p{1.5, 2.0, 3.0};
    bool con_haar = false, con_crosscheck = false;
    constants->add_option("input", con_input, "weight-v1 file")->required();
    constants->add_option("--p", con_p, "finite exponents to include");
    constants->add_option("--scope", con_scope, "gridarcs | dyadic | both");
    constants->add_flag("--haar", con_haar, "embed the Haar expansion of log w");
    constants->add_flag("--crosscheck", con_crosscheck,
                        "embed the oscillation relation reports per p");
    constants->add_option("-o,--output", con_output, "output file (default stdout)");

    // average
    auto* average = app.add_subcommand("average", "average a weight family");
    std::string avg_input, avg_mode = "ga", avg_output = "average.json";
    std::vector<std::int64_t> avg_mask;
    average->add_option("input", avg_input, "family-v1 file")->required();
    average->add_option("--mode", avg_mode, "ga | arith");
    average->add_option("--mask", avg_mask, "shift indices forming the subset E");
    average->add_option("-o,--output", avg_output, "output file");

    // verify
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string ver_suite = "all", ver_output, ver_csv;
    std::uint64_t ver_seed = 1;
    int ver_n = 0;
    verify->add_option("--suite", ver_suite,
                       "lemma35 | haar | averaging-ap | averaging-rhp | doubling-translation | "
                       "product | boundary-examples | all");
    verify->add_option("--seed", ver_seed, "suite seed");
    verify->add_option("--n", ver_n, "override suite resolution");
    verify->add_option("-o,--output", ver_output, "report file (default stdout)");
    verify->add_option("--csv", ver_csv, "curves CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // flag errors are setup errors
    }

    try {
        if (gen->parsed())
            return cmd_gen(gen_kind, gen_n, gen_delta, gen_a, gen_seed, gen_input, gen_cos,
                           gen_sin, gen_model, gen_output);
        if (constants->parsed())
            return cmd_constants(con_input, con_p, con_scope, con_haar, con_crosscheck, con_output);
        if (average->parsed()) return cmd_average(avg_input, avg_mode, avg_mask, avg_output);
        if (verify->parsed()) return cmd_verify(ver_suite, ver_seed, ver_n, ver_output, ver_csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
