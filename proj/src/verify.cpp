#include "mlab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "mlab/averaging.hpp"
#include "mlab/constants.hpp"
#include "mlab/families.hpp"
#include "mlab/haar.hpp"
#include "mlab/oscillation.hpp"
#include "mlab/product.hpp"

namespace mlab {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double rel_diff(double a, double b) {
    return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

// Worst case of an inequality lhs <= rhs over many instances.
struct MinSlack {
    double slack = std::numeric_limits<double>::infinity();
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = true;

    void update(double l, double r) {
        const double s = r - l;
        if (s < slack) {
            slack = s;
            lhs = l;
            rhs = r;
        }
        ok = ok && s >= -1e-9 * std::max({1.0, std::fabs(l), std::fabs(r)});
    }
};

// Worst relative deviation of an equality over many instances.
struct MaxErr {
    double err = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;

    void update(double l, double r) {
        const double e = rel_diff(l, r);
        if (e >= err) {
            err = e;
            lhs = l;
            rhs = r;
        }
    }
};

class SuiteBuilder {
public:
    SuiteBuilder(std::string suite, const SuiteOptions& opts, int default_n, int min_n = 4)
        : start_(Clock::now()) {
        run_.report.suite = std::move(suite);
        run_.report.seed = opts.seed;
        run_.report.n = std::max(opts.n > 0 ? opts.n : default_n, min_n);
        block_start_ = start_;
    }

    int n() const { return run_.report.n; }

    void ineq(const std::string& id, const std::string& anchor, const MinSlack& agg) {
        add_row(id, anchor, agg.ok ? "pass" : "fail", agg.lhs, agg.rhs, agg.slack);
    }
    void ineq(const std::string& id, const std::string& anchor, double lhs, double rhs) {
        MinSlack agg;
        agg.update(lhs, rhs);
        ineq(id, anchor, agg);
    }
    void eq(const std::string& id, const std::string& anchor, const MaxErr& agg, double tol) {
        add_row(id, anchor, agg.err <= tol ? "pass" : "fail", agg.lhs, agg.rhs, tol - agg.err);
    }
    void eq(const std::string& id, const std::string& anchor, double lhs, double rhs,
            double tol) {
        MaxErr agg;
        agg.update(lhs, rhs);
        eq(id, anchor, agg, tol);
    }
    void finite(const std::string& id, const std::string& anchor, double value) {
        const bool ok = std::isfinite(value) && value > 0.0;
        add_row(id, anchor, ok ? "pass" : "fail", value, 0.0, 0.0);
    }
    void reported(const std::string& id, const std::string& anchor, double value,
                  double reference = 0.0) {
        add_row(id, anchor, "reported", value, reference, 0.0);
    }

    void curve(const std::string& series, int n, double value) {
        run_.curves.push_back(CurvePoint{run_.report.suite, series, n, value});
    }

    SuiteRun finish() {
        run_.report.runtime_ms = ms_since(start_);
        return std::move(run_);
    }

private:
    void add_row(const std::string& id, const std::string& anchor, const std::string& status,
                 double lhs, double rhs, double slack) {
        CheckResult row;
        row.id = id;
        row.anchor = anchor;
        row.status = status;
        row.lhs = lhs;
        row.rhs = rhs;
        row.slack = slack;
        row.runtime_ms = ms_since(block_start_);
        block_start_ = Clock::now();
        run_.report.add(std::move(row));
    }

    SuiteRun run_;
    Clock::time_point start_;
    Clock::time_point block_start_;
};

std::vector<Weight> lemma35_weights(std::uint64_t seed, int n, int count) {
    const double deltas[3] = {0.1, 0.3, 0.5};
    std::vector<Weight> ws;
    ws.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        ws.push_back(cascade_weight(
            CascadeSpec{n, deltas[i % 3], derive_seed(seed, static_cast<std::uint64_t>(i))}));
    return ws;
}

GridFn random_mean_zero(int resolution, SplitMix64& rng) {
    const std::int64_t n = std::int64_t{1} << resolution;
    std::vector<double> vals(static_cast<std::size_t>(n));
    long double acc = 0.0L;
    for (auto& v : vals) {
        v = rng.uniform(-2.0, 2.0);
        acc += v;
    }
    const double mean = static_cast<double>(acc / static_cast<long double>(n));
    for (auto& v : vals) v -= mean;
    return GridFn{resolution, std::move(vals)};
}

// ---------------------------------------------------------------------------
// lemma35: the oscillation characterizations against the weight constants,
// plus the BMO bounds of the log.
// ---------------------------------------------------------------------------

SuiteRun run_lemma35(const SuiteOptions& opts) {
    SuiteBuilder b("lemma35", opts, 8, 4);
    const auto weights = lemma35_weights(opts.seed, b.n(), 100);
    const double ps[3] = {1.5, 2.0, 3.0};

    for (Scope scope : {Scope::GridArcs, Scope::Dyadic}) {
        const std::string sc = scope == Scope::GridArcs ? "grid" : "dyadic";
        MaxErr eq_c1;
        MinSlack c1_le_a1, c3_le_log_a1, a1_le_c1expc3, rhinf_le_expc4, c4_le_log, bmo_le_2a1;
        MinSlack c1_le_ap[3], c2_le_root[3], ap_le_c1c2[3], rhp_le_c5[3], c5_le_rhpainf[3],
            bmo_le_ap[3];
        for (const auto& w : weights) {
            const double a1 = ap_constant(w, 1.0, scope);
            const double ainf = ap_constant(w, infinite_p, scope);
            const double rhinf = rhp_sup_part(w, infinite_p, scope);
            const double c1 = osc_constant(w, {OscTag::C1, 0.0}, scope);
            const double c3 = osc_constant(w, {OscTag::C3, 0.0}, scope);
            const double c4 = osc_constant(w, {OscTag::C4, 0.0}, scope);
            const double bmo = bmo_norm(log_values(w), scope, 1);
            eq_c1.update(ainf, c1);
            c1_le_a1.update(c1, a1);
            c3_le_log_a1.update(c3, std::log(a1));
            a1_le_c1expc3.update(a1, c1 * std::exp(c3));
            rhinf_le_expc4.update(rhinf, std::exp(c4));
            c4_le_log.update(c4, std::log(rhinf * ainf));
            bmo_le_2a1.update(bmo, 2.0 * a1);
            for (int k = 0; k < 3; ++k) {
                const double p = ps[k];
                const double ap = ap_constant(w, p, scope);
                const double rhp = rhp_sup_part(w, p, scope);
                const double c2 = osc_constant(w, {OscTag::C2, p}, scope);
                const double c5 = osc_constant(w, {OscTag::C5, p}, scope);
                c1_le_ap[k].update(c1, ap);
                c2_le_root[k].update(c2, std::pow(ap, 1.0 / (p - 1.0)));
                ap_le_c1c2[k].update(ap, c1 * std::pow(c2, p - 1.0));
                rhp_le_c5[k].update(rhp, std::pow(c5, 1.0 / p));
                c5_le_rhpainf[k].update(std::pow(c5, 1.0 / p), rhp * ainf);
                bmo_le_ap[k].update(bmo, ap + (p - 1.0) * std::pow(ap, 1.0 / (p - 1.0)));
            }
        }
        b.eq("c1-eq-ainf-" + sc, "osc/c1-eq-ainf", eq_c1, 1e-10);
        b.ineq("c1-le-a1-" + sc, "osc/forward", c1_le_a1);
        b.ineq("c3-le-log-a1-" + sc, "osc/forward", c3_le_log_a1);
        b.ineq("a1-le-c1-expc3-" + sc, "osc/reverse", a1_le_c1expc3);
        b.ineq("rhinf-le-expc4-" + sc, "osc/reverse", rhinf_le_expc4);
        b.ineq("c4-le-log-rhinf-ainf-" + sc, "osc/forward", c4_le_log);
        b.ineq("bmo-le-2a1-" + sc, "bmo/log-bound", bmo_le_2a1);
        for (int k = 0; k < 3; ++k) {
            const std::string pp = "-p" + format_p(ps[k]) + "-" + sc;
            b.ineq("c1-le-ap" + pp, "osc/forward", c1_le_ap[k]);
            b.ineq("c2-le-ap-root" + pp, "osc/forward", c2_le_root[k]);
            b.ineq("ap-le-c1-c2pow" + pp, "osc/reverse", ap_le_c1c2[k]);
            b.ineq("rhp-le-c5-root" + pp, "osc/reverse", rhp_le_c5[k]);
            b.ineq("c5-root-le-rhp-ainf" + pp, "osc/forward", c5_le_rhpainf[k]);
            b.ineq("bmo-le-ap-bound" + pp, "bmo/log-bound", bmo_le_ap[k]);
        }
    }

    // closed form: w = [1, 3] has A_inf = C1 = 2/sqrt(3) at the root
    const Weight w13 = make_weight(1, {1.0, 3.0});
    const double expected = 2.0 / std::sqrt(3.0);
    MaxErr w13_err;
    w13_err.update(osc_constant(w13, {OscTag::C1, 0.0}, Scope::GridArcs), expected);
    w13_err.update(ap_constant(w13, infinite_p, Scope::GridArcs), expected);
    b.eq("c1-eq-ainf-w13", "osc/c1-eq-ainf", w13_err, 1e-10);
    return b.finish();
}

// ---------------------------------------------------------------------------
// haar: roundtrip, Parseval, the Carleson packing equality, the averaging
// identity, and the split partition.
// ---------------------------------------------------------------------------

SuiteRun run_haar(const SuiteOptions& opts) {
    SuiteBuilder b("haar", opts, 10, 5);
    SplitMix64 rng(derive_seed(opts.seed, 77));
    MaxErr roundtrip, parseval, carleson_eq, averaging_id, split_sum;
    for (int i = 0; i < 50; ++i) {
        const int resolution = 4 + i % (std::max(1, b.n() - 3));
        const GridFn f = random_mean_zero(resolution, rng);
        const std::int64_t n = f.cells();
        const HaarCoeffs c = haar_analyze(f);
        const GridFn back = haar_reconstruct(c);
        for (std::int64_t j = 0; j < n; ++j)
            roundtrip.update(back.values[static_cast<std::size_t>(j)],
                             f.values[static_cast<std::size_t>(j)]);

        long double sq = 0.0L;
        for (double v : f.values) sq += static_cast<long double>(v) * v;
        const double norm2 = static_cast<double>(sq / static_cast<long double>(n));
        long double coeff_sq = static_cast<long double>(c.mean) * c.mean;
        for (const auto& level : c.levels)
            for (double v : level) coeff_sq += static_cast<long double>(v) * v;
        parseval.update(norm2, static_cast<double>(coeff_sq));

        // smallest packing constant == sup over dyadic I of avg |f - f_I|^2
        const double packing = carleson_constant(f);
        double osc_sup = 0.0;
        const auto sums = dyadic_sum_pyramid(f.values);
        for (int k = 0; k <= resolution; ++k) {
            const std::int64_t len = std::int64_t{1} << (resolution - k);
            for (std::int64_t j = 0; j < (std::int64_t{1} << k); ++j) {
                const double m =
                    sums[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] /
                    static_cast<double>(len);
                long double acc = 0.0L;
                for (std::int64_t t = j * len; t < (j + 1) * len; ++t) {
                    const double d = f.values[static_cast<std::size_t>(t)] - m;
                    acc += static_cast<long double>(d) * d;
                }
                osc_sup = std::max(osc_sup,
                                   static_cast<double>(acc / static_cast<long double>(len)));
            }
        }
        carleson_eq.update(packing, osc_sup);

        // avg over I == mean + coarser Haar terms, for every level at once
        for (int k = 0; k <= resolution; ++k) {
            HaarCoeffs trunc = c;
            for (int t = k; t < resolution; ++t)
                trunc.levels[static_cast<std::size_t>(t)].assign(std::size_t{1} << t, 0.0);
            const GridFn partial = haar_reconstruct(trunc);
            const GridFn cond = conditional_mean(f, k);
            for (std::int64_t j = 0; j < n; ++j)
                averaging_id.update(partial.values[static_cast<std::size_t>(j)],
                                    cond.values[static_cast<std::size_t>(j)]);
        }

        for (std::int64_t cutoff : {std::int64_t{1}, std::int64_t{3}, n / 2, n}) {
            if (cutoff < 1) continue;
            const ScaleSplit split = scale_split(f, cutoff);
            for (std::int64_t j = 0; j < n; ++j)
                split_sum.update(split.small_scales.values[static_cast<std::size_t>(j)] +
                                     split.large_scales.values[static_cast<std::size_t>(j)],
                                 f.values[static_cast<std::size_t>(j)]);
        }
    }
    b.eq("analyze-reconstruct-roundtrip", "haar/roundtrip", roundtrip, 1e-12);
    b.eq("parseval", "haar/parseval", parseval, 1e-12);
    b.eq("carleson-smallest-constant", "haar/carleson", carleson_eq, 1e-10);
    b.eq("averaging-identity", "haar/averaging-identity", averaging_id, 1e-12);
    b.eq("scale-split-partition", "haar/split", split_sum, 1e-12);
    return b.finish();
}

// ---------------------------------------------------------------------------
// averaging helpers shared by the -ap and -rhp suites
// ---------------------------------------------------------------------------

double member_sup(const WeightFamily& fam, const std::function<double(const Weight&)>& f) {
    double best = 0.0;
    for (std::size_t i = 0; i < fam.members.size(); ++i)
        if (fam.mask[i]) best = std::max(best, f(fam.members[i]));
    return best;
}

struct EnvelopeInputs {
    WeightFamily normalized;
    Weight omega;
    CaCb cacb;
};

EnvelopeInputs envelope_inputs(const WeightFamily& fam) {
    EnvelopeInputs e{normalize_logmean(fam).first, Weight{}, CaCb{}};
    e.omega = ga_average(e.normalized);
    const auto logs = member_logs(e.normalized);
    e.cacb = ca_cb_envelope(logs, e.normalized.mask);
    return e;
}

SuiteRun run_averaging_ap(const SuiteOptions& opts) {
    SuiteBuilder b("averaging-ap", opts, 10, 6);
    const int n_hi = b.n();

    MinSlack stability;
    double worst_a2 = 0.0;
    double uniform_bound = 0.0;
    for (int f = 0; f < 20; ++f) {
        const WeightFamily fam =
            cascade_family(n_hi, 0.3, derive_seed(opts.seed, 1000 + static_cast<std::uint64_t>(f)));
        uniform_bound = std::max(
            uniform_bound,
            member_sup(fam, [](const Weight& m) { return ap_constant(m, 2.0, Scope::Dyadic); }));
        const double a2_hi = ap_constant(ga_average(fam), 2.0, Scope::GridArcs);
        const double a2_lo = ap_constant(ga_average(coarsen(fam, 2)), 2.0, Scope::GridArcs);
        worst_a2 = std::max(worst_a2, a2_hi);
        const double ratio = std::max(a2_hi / a2_lo, a2_lo / a2_hi);
        stability.update(ratio, 2.0);
        if (f < 2) {
            b.curve("ga-a2-fam" + std::to_string(f), n_hi, a2_hi);
            b.curve("ga-a2-fam" + std::to_string(f), n_hi - 2, a2_lo);
        }
    }
    b.reported("ga-uniform-dyadic-a2-bound", "averaging/hypothesis", uniform_bound);
    b.finite("ga-a2-finite", "averaging/ga-ap", worst_a2);
    b.ineq("ga-a2-resolution-stable", "averaging/ga-ap", stability);

    // rescaling one member must leave every constant unchanged
    MaxErr rescale;
    for (int f = 0; f < 3; ++f) {
        WeightFamily fam =
            cascade_family(8, 0.3, derive_seed(opts.seed, 1000 + static_cast<std::uint64_t>(f)));
        const double before = ap_constant(ga_average(fam), 2.0, Scope::GridArcs);
        for (double lambda : {0.1, 7.0}) {
            WeightFamily scaled = fam;
            const std::size_t idx = static_cast<std::size_t>(f) % scaled.members.size();
            scaled.members[idx] = scale_weight(scaled.members[idx], lambda);
            rescale.update(before, ap_constant(ga_average(scaled), 2.0, Scope::GridArcs));
        }
    }
    b.eq("ga-member-rescale-invariant", "averaging/scale-invariance", rescale, 1e-10);

    // translate family: shifted slices reassemble the original weight
    {
        const Weight w = cascade_weight(CascadeSpec{n_hi, 0.3, derive_seed(opts.seed, 4242)});
        const WeightFamily tf = translate_family(w);
        MaxErr ga_id, arith_id;
        const Weight ga = ga_average(tf);
        const Weight arith = translation_average(tf);
        for (std::size_t i = 0; i < w.values.size(); ++i) {
            ga_id.update(ga.values[i], w.values[i]);
            arith_id.update(arith.values[i], w.values[i]);
        }
        b.eq("ga-translate-identity", "averaging/translate-family", ga_id, 1e-12);
        b.eq("arith-translate-identity", "averaging/translate-family", arith_id, 1e-12);
    }

    // log(ga) is the translation-average of the logs; normalization commutes
    {
        const WeightFamily fam = cascade_family(8, 0.3, derive_seed(opts.seed, 555));
        const GridFn avg_log = shifted_average(member_logs(fam), fam.mask);
        const Weight omega = ga_average(fam);
        MaxErr log_lin;
        for (std::size_t i = 0; i < omega.values.size(); ++i)
            log_lin.update(std::log(omega.values[i]), avg_log.values[i]);
        b.eq("ga-log-linearity", "averaging/omega-phi", log_lin, 1e-12);

        const auto [normalized, record] = normalize_logmean(fam);
        const Weight omega_norm = ga_average(normalized);
        MaxErr commute;
        for (std::size_t i = 0; i < omega.values.size(); ++i)
            commute.update(omega.values[i], record.grand_factor * omega_norm.values[i]);
        b.eq("ga-normalization-commutes", "averaging/normalization", commute, 1e-12);
    }

    // finiteness across the p range on a few families
    for (double p : {1.0, 1.5, infinite_p}) {
        double worst = 0.0;
        for (int f = 0; f < 3; ++f) {
            const WeightFamily fam =
                cascade_family(8, 0.3, derive_seed(opts.seed, 1000 + static_cast<std::uint64_t>(f)));
            worst = std::max(worst, ap_constant(ga_average(fam), p, Scope::GridArcs));
        }
        b.finite("ga-a" + format_p(p) + "-finite", "averaging/ga-ap", worst);
    }

    // quantitative envelope, beta = 1, and the lower-oscillation route
    MinSlack envelope1, blo_route;
    for (int f = 0; f < 10; ++f) {
        const WeightFamily fam =
            cascade_family(8, 0.3, derive_seed(opts.seed, 2000 + static_cast<std::uint64_t>(f)));
        const EnvelopeInputs e = envelope_inputs(fam);
        const double cd1 = member_sup(e.normalized, [](const Weight& m) {
            return osc_constant(m, {OscTag::C1, 0.0}, Scope::Dyadic);
        });
        const double lhs = osc_constant(e.omega, {OscTag::C1, 0.0}, Scope::GridArcs);
        envelope1.update(lhs, 4.0 * cd1 * std::exp(std::sqrt(e.cacb.ca) + e.cacb.cb));

        const double c3d = member_sup(e.normalized, [](const Weight& m) {
            return osc_constant(m, {OscTag::C3, 0.0}, Scope::Dyadic);
        });
        const double lhs3 = osc_constant(e.omega, {OscTag::C3, 0.0}, Scope::GridArcs);
        blo_route.update(lhs3, std::sqrt(e.cacb.ca) + e.cacb.cb + c3d);
    }
    b.ineq("exp-envelope-beta1", "averaging/exp-envelope", envelope1);
    b.ineq("blo-envelope", "averaging/blo-envelope", blo_route);

    // forward factorization: A_2(w1 w2^-1) <= A_1(w1) A_1(w2)
    MinSlack factorization;
    for (int i = 0; i < 50; ++i) {
        const Weight w1 =
            cascade_weight(CascadeSpec{8, 0.3, derive_seed(opts.seed, 3000 + 2 * static_cast<std::uint64_t>(i))});
        const Weight w2 =
            cascade_weight(CascadeSpec{8, 0.3, derive_seed(opts.seed, 3001 + 2 * static_cast<std::uint64_t>(i))});
        const Weight prod = ap_factor_product(w1, w2, 2.0);
        factorization.update(ap_constant(prod, 2.0, Scope::GridArcs),
                             ap_constant(w1, 1.0, Scope::GridArcs) *
                                 ap_constant(w2, 1.0, Scope::GridArcs));
    }
    b.ineq("factorization-forward", "averaging/factorization", factorization);
    return b.finish();
}

SuiteRun run_averaging_rhp(const SuiteOptions& opts) {
    SuiteBuilder b("averaging-rhp", opts, 10, 6);
    const int n_hi = b.n();

    MinSlack stability;
    double worst_rh2 = 0.0;
    double uniform_bound = 0.0;
    for (int f = 0; f < 20; ++f) {
        const WeightFamily fam =
            cascade_family(n_hi, 0.3, derive_seed(opts.seed, 6000 + static_cast<std::uint64_t>(f)));
        uniform_bound = std::max(
            uniform_bound,
            member_sup(fam, [](const Weight& m) { return rhp_constant(m, 2.0, Scope::Dyadic); }));
        const double rh_hi = rhp_constant(ga_average(fam), 2.0, Scope::GridArcs);
        const double rh_lo = rhp_constant(ga_average(coarsen(fam, 2)), 2.0, Scope::GridArcs);
        worst_rh2 = std::max(worst_rh2, rh_hi);
        stability.update(std::max(rh_hi / rh_lo, rh_lo / rh_hi), 2.0);
        if (f < 2) {
            b.curve("ga-rh2-fam" + std::to_string(f), n_hi, rh_hi);
            b.curve("ga-rh2-fam" + std::to_string(f), n_hi - 2, rh_lo);
        }
    }
    b.reported("ga-uniform-dyadic-rh2-bound", "averaging/hypothesis", uniform_bound);
    b.finite("ga-rh2-finite", "averaging/ga-rhp", worst_rh2);
    b.ineq("ga-rh2-resolution-stable", "averaging/ga-rhp", stability);

    for (double p : {1.5, infinite_p}) {
        double worst = 0.0;
        for (int f = 0; f < 3; ++f) {
            const WeightFamily fam =
                cascade_family(8, 0.3, derive_seed(opts.seed, 6000 + static_cast<std::uint64_t>(f)));
            worst = std::max(worst, rhp_constant(ga_average(fam), p, Scope::GridArcs));
        }
        b.finite("ga-rh" + format_p(p) + "-finite", "averaging/ga-rhp", worst);
    }

    MinSlack envelope2, upper_route;
    for (int f = 0; f < 10; ++f) {
        const WeightFamily fam =
            cascade_family(8, 0.3, derive_seed(opts.seed, 7000 + static_cast<std::uint64_t>(f)));
        const EnvelopeInputs e = envelope_inputs(fam);
        const double cd2 = member_sup(e.normalized, [](const Weight& m) {
            return osc_constant(m, {OscTag::C5, 2.0}, Scope::Dyadic);
        });
        const double lhs = osc_constant(e.omega, {OscTag::C5, 2.0}, Scope::GridArcs);
        envelope2.update(lhs,
                         4.0 * cd2 * std::exp(2.0 * (std::sqrt(e.cacb.ca) + e.cacb.cb)));

        const double c4d = member_sup(e.normalized, [](const Weight& m) {
            return osc_constant(m, {OscTag::C4, 0.0}, Scope::Dyadic);
        });
        const double lhs4 = osc_constant(e.omega, {OscTag::C4, 0.0}, Scope::GridArcs);
        upper_route.update(lhs4, std::sqrt(e.cacb.ca) + e.cacb.cb + c4d);
    }
    b.ineq("exp-envelope-beta2", "averaging/exp-envelope", envelope2);
    b.ineq("upper-oscillation-envelope", "averaging/blo-envelope", upper_route);
    return b.finish();
}

// ---------------------------------------------------------------------------
// doubling-translation: translation averages of genuinely doubling families,
// the explicit member bound, and the seam separation witness.
// ---------------------------------------------------------------------------

SuiteRun run_doubling_translation(const SuiteOptions& opts) {
    SuiteBuilder b("doubling-translation", opts, 10, 6);
    const int n_hi = b.n();
    const int n_lo = n_hi - 2;

    MinSlack stability, member_bound;
    double worst_a2 = 0.0, worst_rh2 = 0.0;
    for (int f = 0; f < 20; ++f) {
        const std::uint64_t fseed = derive_seed(opts.seed, 8000 + static_cast<std::uint64_t>(f));
        const WeightFamily hi = smooth_family(n_hi, fseed);
        const WeightFamily lo = smooth_family(n_lo, fseed);
        const Weight avg_hi = translation_average(hi);
        const Weight avg_lo = translation_average(lo);
        const double a2_hi = ap_constant(avg_hi, 2.0, Scope::GridArcs);
        const double a2_lo = ap_constant(avg_lo, 2.0, Scope::GridArcs);
        worst_a2 = std::max(worst_a2, a2_hi);
        worst_rh2 = std::max(worst_rh2, rhp_constant(avg_hi, 2.0, Scope::GridArcs));
        stability.update(std::max(a2_hi / a2_lo, a2_lo / a2_hi), 2.0);
        if (f < 2) {
            b.curve("translation-a2-fam" + std::to_string(f), n_hi, a2_hi);
            b.curve("translation-a2-fam" + std::to_string(f), n_lo, a2_lo);
        }

        // explicit member bound A_2 <= 2^{2p-1} V_{p,d} C_dbl^2 at p = 2
        const double v2d = member_sup(
            lo, [](const Weight& m) { return ap_constant(m, 2.0, Scope::Dyadic); });
        const double cdbl = member_sup(
            lo, [](const Weight& m) { return doubling_constant(m, Scope::GridArcs); });
        for (const auto& m : lo.members)
            member_bound.update(ap_constant(m, 2.0, Scope::GridArcs),
                                8.0 * v2d * cdbl * cdbl);
    }
    b.finite("translation-a2-finite", "doubling/translation-ap", worst_a2);
    b.finite("translation-rh2-finite", "doubling/translation-rhp", worst_rh2);
    b.ineq("translation-a2-resolution-stable", "doubling/translation-ap", stability);
    b.ineq("member-a2-le-explicit-bound", "doubling/vp-bound", member_bound);

    // seam: dyadically tame, continuously wild
    {
        const double a = 0.5;
        double prev_dbl = 0.0;
        double prev_a2d = 0.0;
        MinSlack growth;
        MaxErr dyadic_dbl_closed;
        for (int n = 8; n <= 12; ++n) {
            const Weight seam = seam_weight(n, a);
            const double dbl = doubling_constant(seam, Scope::GridArcs);
            const double dbl_d = doubling_constant(seam, Scope::Dyadic);
            const double a2d = ap_constant(seam, 2.0, Scope::Dyadic);
            dyadic_dbl_closed.update(dbl_d, 2.0 / (1.0 - a));
            if (prev_dbl > 0.0) growth.update(2.5, dbl / prev_dbl);
            if (n == 8 || n == 10 || n == 12) {
                if (prev_a2d > 0.0)
                    b.reported("seam-dyadic-a2-ratio-n" + std::to_string(n),
                               "seam/dyadic-a2-growth", a2d / prev_a2d, 1.1);
                prev_a2d = a2d;
            }
            prev_dbl = dbl;
            b.curve("seam-grid-doubling", n, dbl);
            b.curve("seam-dyadic-a2", n, a2d);
            b.curve("seam-dyadic-doubling", n, dbl_d);
        }
        b.eq("seam-dyadic-doubling-closed-form", "seam/dyadic-doubling", dyadic_dbl_closed,
             1e-12);
        b.ineq("seam-grid-doubling-growth", "seam/grid-doubling-growth", growth);
    }
    return b.finish();
}

// ---------------------------------------------------------------------------
// product: bidisc rectangle sweeps, separability, the 2D averages.
// ---------------------------------------------------------------------------

double naive_rect_a2(const Weight2D& w) {
    const std::int64_t n = w.side();
    double best = 0.0;
    auto sweep_axis = [n](std::int64_t len) { return len == n ? std::int64_t{1} : n; };
    for (std::int64_t lx = 1; lx <= n; ++lx)
        for (std::int64_t ly = 1; ly <= n; ++ly)
            for (std::int64_t sx = 0; sx < sweep_axis(lx); ++sx)
                for (std::int64_t sy = 0; sy < sweep_axis(ly); ++sy) {
                    long double acc = 0.0L, inv = 0.0L;
                    for (std::int64_t i = 0; i < lx; ++i)
                        for (std::int64_t j = 0; j < ly; ++j) {
                            const double v = w.value(mod_cells(sx + i, n), mod_cells(sy + j, n));
                            acc += v;
                            inv += 1.0 / v;
                        }
                    const double cells = static_cast<double>(lx) * static_cast<double>(ly);
                    best = std::max(best, static_cast<double>(acc / cells) *
                                              static_cast<double>(inv / cells));
                }
    return best;
}

SuiteRun run_product(const SuiteOptions& opts) {
    SuiteBuilder b("product", opts, 5, 4);
    const int n = b.n();

    // separability against the 1D sweeps
    {
        const Weight u = cascade_weight(CascadeSpec{n, 0.3, derive_seed(opts.seed, 9001)});
        const Weight v = cascade_weight(CascadeSpec{n, 0.3, derive_seed(opts.seed, 9002)});
        const Weight2D uv = tensor_weight(u, v);
        for (Scope scope : {Scope::GridArcs, Scope::Dyadic}) {
            const std::string sc = scope == Scope::GridArcs ? "grid" : "dyadic";
            for (double p : {1.0, 2.0, infinite_p}) {
                MaxErr err;
                err.update(ap_constant_2d(uv, p, scope),
                           ap_constant(u, p, scope) * ap_constant(v, p, scope));
                b.eq("separability-a" + format_p(p) + "-" + sc, "product/separability", err,
                     1e-9);
            }
        }
        MaxErr reduce;
        const Weight ones = make_weight(n, std::vector<double>(std::size_t{1} << n, 1.0));
        reduce.update(ap_constant_2d(tensor_weight(u, ones), 2.0, Scope::GridArcs),
                      ap_constant(u, 2.0, Scope::GridArcs));
        b.eq("full-second-factor-reduces-to-1d", "product/reduction", reduce, 1e-12);
    }

    // double-translate identity for both averages
    {
        const Weight2D w = cascade_weight_2d(CascadeSpec{n, 0.3, derive_seed(opts.seed, 9100)});
        const std::int64_t side = w.side();
        std::vector<Weight2D> members;
        members.reserve(static_cast<std::size_t>(side * side));
        for (std::int64_t i = 0; i < side; ++i)
            for (std::int64_t j = 0; j < side; ++j) {
                std::vector<double> vals(static_cast<std::size_t>(side * side));
                for (std::int64_t x = 0; x < side; ++x)
                    for (std::int64_t y = 0; y < side; ++y)
                        vals[static_cast<std::size_t>(x * side + y)] =
                            w.value(mod_cells(x - i, side), mod_cells(y - j, side));
                members.push_back(make_weight_2d(n, std::move(vals)));
            }
        const WeightFamily2D fam = make_family_2d(std::move(members));
        MaxErr ga_id, arith_id;
        const Weight2D ga = ga_average_2d(fam);
        const Weight2D arith = translation_average_2d(fam);
        for (std::size_t c = 0; c < w.values.size(); ++c) {
            ga_id.update(ga.values[c], w.values[c]);
            arith_id.update(arith.values[c], w.values[c]);
        }
        b.eq("ga2d-double-translate-identity", "product/translate-family", ga_id, 1e-12);
        b.eq("arith2d-double-translate-identity", "product/translate-family", arith_id, 1e-12);
    }

    // 2D cascade families: product averaging conclusion
    {
        double worst_a2 = 0.0;
        double uniform_bound = 0.0;
        double slice_ratio = 0.0;
        for (int f = 0; f < 3; ++f) {
            const WeightFamily2D fam =
                cascade_family_2d(n, 0.3, derive_seed(opts.seed, 9200 + static_cast<std::uint64_t>(f)));
            for (const auto& m : fam.members)
                uniform_bound = std::max(uniform_bound, ap_constant_2d(m, 2.0, Scope::Dyadic));
            const Weight2D omega = ga_average_2d(fam);
            worst_a2 = std::max(worst_a2, ap_constant_2d(omega, 2.0, Scope::GridArcs));
            for (SliceAxis axis : {SliceAxis::X, SliceAxis::Y}) {
                const SliceConstants slices = slice_constants(omega, 2.0, axis);
                const double lo =
                    *std::min_element(slices.per_slice.begin(), slices.per_slice.end());
                slice_ratio = std::max(slice_ratio, slices.max_constant / lo);
            }
        }
        b.reported("product-uniform-dyadic-a2-bound", "product/hypothesis", uniform_bound);
        b.finite("ga2d-rect-a2-finite", "product/ga-ap", worst_a2);
        b.reported("ga2d-slice-max-min-ratio", "product/slices", slice_ratio);
    }

    // 2D smooth doubling family: translation average stays in the class
    {
        const WeightFamily2D fam = smooth_family_2d(std::min(n, 4), derive_seed(opts.seed, 9400));
        const Weight2D avg = translation_average_2d(fam);
        b.finite("translation2d-a2-finite", "product/translation-ap",
                 ap_constant_2d(avg, 2.0, Scope::GridArcs));
    }

    // brute-force oracle at N=4
    {
        const Weight2D w = cascade_weight_2d(CascadeSpec{4, 0.3, derive_seed(opts.seed, 9300)});
        MaxErr sweep_eq;
        sweep_eq.update(ap_constant_2d(w, 2.0, Scope::GridArcs), naive_rect_a2(w));
        b.eq("rect-sweep-vs-bruteforce", "product/oracle", sweep_eq, 1e-12);

        MaxErr avg_eq;
        SplitMix64 rng(derive_seed(opts.seed, 9301));
        const std::int64_t side = w.side();
        for (int i = 0; i < 20; ++i) {
            const Arc qx{static_cast<std::int64_t>(rng.next() % static_cast<std::uint64_t>(side)),
                         1 + static_cast<std::int64_t>(rng.next() % static_cast<std::uint64_t>(side))};
            const Arc qy{static_cast<std::int64_t>(rng.next() % static_cast<std::uint64_t>(side)),
                         1 + static_cast<std::int64_t>(rng.next() % static_cast<std::uint64_t>(side))};
            long double acc = 0.0L;
            for (std::int64_t dx = 0; dx < qx.length; ++dx)
                for (std::int64_t dy = 0; dy < qy.length; ++dy)
                    acc += w.value(mod_cells(qx.start + dx, side), mod_cells(qy.start + dy, side));
            avg_eq.update(rect_average(w, qx, qy),
                          static_cast<double>(acc / static_cast<long double>(qx.length * qy.length)));
        }
        b.eq("rect-average-vs-naive", "product/oracle", avg_eq, 1e-12);
    }

    // height-1 rectangles coincide with the slice sweep
    {
        const Weight2D w = cascade_weight_2d(CascadeSpec{4, 0.3, derive_seed(opts.seed, 9500)});
        const std::int64_t side = w.side();
        double rect_sup = 0.0;
        for (std::int64_t sy = 0; sy < side; ++sy) {
            std::vector<double> row(static_cast<std::size_t>(side));
            for (std::int64_t x = 0; x < side; ++x)
                row[static_cast<std::size_t>(x)] = w.value(x, sy);
            rect_sup = std::max(rect_sup, ap_constant(make_weight(4, row), 2.0, Scope::GridArcs));
        }
        const SliceConstants slices = slice_constants(w, 2.0, SliceAxis::X);
        MaxErr eq;
        eq.update(rect_sup, slices.max_constant);
        b.eq("slice-sweep-equals-height1", "product/slices", eq, 1e-12);
    }
    return b.finish();
}

// ---------------------------------------------------------------------------
// boundary-examples: the borderline weights separate the endpoint classes.
// ---------------------------------------------------------------------------

SuiteRun run_boundary(const SuiteOptions& opts) {
    SuiteBuilder b("boundary-examples", opts, 14, 10);
    const int n_hi = b.n();
    const int n_lo = 8;

    double a1_lo = 0.0, a1_hi = 0.0, a2_lo = 0.0, a2_hi = 0.0;
    double rhinf_lo = 0.0, rhinf_hi = 0.0, rh2_lo = 0.0, rh2_hi = 0.0;
    for (int n = n_lo; n <= n_hi; n += 2) {
        const bool last = n + 2 > n_hi;
        const Weight wa = boundary_log_weight(n, BoundaryKind::A1Boundary);
        const Weight wr = boundary_log_weight(n, BoundaryKind::RHInfBoundary);
        const double a1 = ap_constant(wa, 1.0, Scope::GridArcs);
        const double a2 = ap_constant(wa, 2.0, Scope::GridArcs);
        const double rhinf = rhp_sup_part(wr, infinite_p, Scope::GridArcs);
        const double rh2 = rhp_sup_part(wr, 2.0, Scope::GridArcs);
        b.curve("a1-model-A_1", n, a1);
        b.curve("a1-model-A_2", n, a2);
        b.curve("rhinf-model-RH_inf", n, rhinf);
        b.curve("rhinf-model-RH_2", n, rh2);
        if (n == n_lo) {
            a1_lo = a1;
            a2_lo = a2;
            rhinf_lo = rhinf;
            rh2_lo = rh2;
        }
        if (last) {
            a1_hi = a1;
            a2_hi = a2;
            rhinf_hi = rhinf;
            rh2_hi = rh2;
        }
    }
    b.ineq("a1-model-a1-grows", "boundary/a1-growth", 1.5, a1_hi / a1_lo);
    b.ineq("a1-model-a2-stable", "boundary/a1-growth", a2_hi / a2_lo, 1.1);
    b.ineq("rhinf-model-rhinf-grows", "boundary/rhinf-growth", 1.5, rhinf_hi / rhinf_lo);
    b.ineq("rhinf-model-rh2-stable", "boundary/rhinf-growth", rh2_hi / rh2_lo, 1.1);
    return b.finish();
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"lemma35",  "haar",    "averaging-ap",      "averaging-rhp",
            "doubling-translation", "product", "boundary-examples", "all"};
}

SuiteRun run_suite(const std::string& name, const SuiteOptions& opts) {
    if (name == "lemma35") return run_lemma35(opts);
    if (name == "haar") return run_haar(opts);
    if (name == "averaging-ap") return run_averaging_ap(opts);
    if (name == "averaging-rhp") return run_averaging_rhp(opts);
    if (name == "doubling-translation") return run_doubling_translation(opts);
    if (name == "product") return run_product(opts);
    if (name == "boundary-examples") return run_boundary(opts);
    if (name == "all") {
        SuiteRun all;
        all.report.suite = "all";
        all.report.seed = opts.seed;
        all.report.n = opts.n;
        const auto t0 = Clock::now();
        for (const auto& sub : suite_names()) {
            if (sub == "all") continue;
            SuiteOptions sub_opts = opts;
            sub_opts.n = 0;  // per-suite defaults
            SuiteRun run = run_suite(sub, sub_opts);
            for (auto& c : run.report.checks) {
                c.id = sub + "/" + c.id;
                all.report.add(std::move(c));
            }
            for (auto& p : run.curves) all.curves.push_back(std::move(p));
        }
        all.report.runtime_ms = ms_since(t0);
        return all;
    }
    throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace mlab
