#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mlab/families.hpp"
#include "mlab/haar.hpp"

using namespace mlab;

namespace {

// h_I as a grid vector: +|I|^{-1/2} on the left half, -|I|^{-1/2} on the right.
std::vector<double> haar_vector(const DyadicInterval& I, int resolution) {
    const std::int64_t n = std::int64_t{1} << resolution;
    std::vector<double> h(static_cast<std::size_t>(n), 0.0);
    const std::int64_t len = std::int64_t{1} << (resolution - I.level);
    const std::int64_t start = I.index * len;
    const double height = std::exp2(0.5 * I.level);  // |I|^{-1/2}
    for (std::int64_t c = start; c < start + len / 2; ++c)
        h[static_cast<std::size_t>(c)] = height;
    for (std::int64_t c = start + len / 2; c < start + len; ++c)
        h[static_cast<std::size_t>(c)] = -height;
    return h;
}

// (f, h_I) by direct inner product, the O(n^2) oracle for haar_analyze.
double inner_product_coeff(const GridFn& f, const DyadicInterval& I) {
    const auto h = haar_vector(I, f.resolution);
    long double acc = 0.0L;
    for (std::size_t c = 0; c < h.size(); ++c) acc += f.values[c] * h[c];
    return static_cast<double>(acc * std::ldexp(1.0L, -f.resolution));
}

GridFn random_fn(int resolution, SplitMix64& rng, bool mean_zero) {
    const std::int64_t n = std::int64_t{1} << resolution;
    std::vector<double> vals(static_cast<std::size_t>(n));
    long double acc = 0.0L;
    for (auto& v : vals) {
        v = rng.uniform(-3.0, 3.0);
        acc += v;
    }
    if (mean_zero) {
        const double mean = static_cast<double>(acc / static_cast<long double>(n));
        for (auto& v : vals) v -= mean;
    }
    return GridFn{resolution, std::move(vals)};
}

}  // namespace

TEST_CASE("haar_analyze matches hand examples") {
    const HaarCoeffs c = haar_analyze(GridFn{1, {1.0, -1.0}});
    CHECK(c.mean == doctest::Approx(0.0));
    CHECK(c.levels[0][0] == doctest::Approx(1.0));

    const HaarCoeffs flat = haar_analyze(GridFn{3, std::vector<double>(8, 2.5)});
    CHECK(flat.mean == doctest::Approx(2.5));
    for (const auto& level : flat.levels)
        for (double v : level) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("haar_analyze agrees with the inner-product oracle") {
    SplitMix64 rng(21);
    const GridFn f1234{2, {1.0, 2.0, 3.0, 4.0}};
    const HaarCoeffs c = haar_analyze(f1234);
    CHECK(c.mean == doctest::Approx(2.5));
    for (const auto& I : dyadic_intervals(2)) {
        if (I.level == 2) continue;
        CHECK(c.coeff(I) == doctest::Approx(inner_product_coeff(f1234, I)).epsilon(1e-14));
    }
    for (int trial = 0; trial < 3; ++trial) {
        const GridFn f = random_fn(5, rng, false);
        const HaarCoeffs cf = haar_analyze(f);
        for (const auto& I : dyadic_intervals(5)) {
            if (I.level == 5) continue;
            CHECK(cf.coeff(I) == doctest::Approx(inner_product_coeff(f, I)).epsilon(1e-12));
        }
    }
}

TEST_CASE("haar roundtrip is the identity") {
    SplitMix64 rng(22);
    for (int res = 0; res <= 10; ++res) {
        const GridFn f = random_fn(res, rng, false);
        const GridFn back = haar_reconstruct(haar_analyze(f));
        for (std::size_t i = 0; i < f.values.size(); ++i)
            CHECK(back.values[i] == doctest::Approx(f.values[i]).epsilon(1e-12));
    }
    // single coefficient 1 on [0,1), zero mean -> [1, -1]
    HaarCoeffs c;
    c.resolution = 1;
    c.mean = 0.0;
    c.levels = {{1.0}};
    const GridFn f = haar_reconstruct(c);
    CHECK(f.values[0] == doctest::Approx(1.0));
    CHECK(f.values[1] == doctest::Approx(-1.0));
}

TEST_CASE("parseval holds with the explicit mean term") {
    SplitMix64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const GridFn f = random_fn(7, rng, false);
        long double sq = 0.0L;
        for (double v : f.values) sq += static_cast<long double>(v) * v;
        const double norm2 = static_cast<double>(sq / static_cast<long double>(f.cells()));
        const HaarCoeffs c = haar_analyze(f);
        long double total = static_cast<long double>(c.mean) * c.mean;
        for (const auto& level : c.levels)
            for (double v : level) total += static_cast<long double>(v) * v;
        CHECK(static_cast<double>(total) == doctest::Approx(norm2).epsilon(1e-12));
    }
}

TEST_CASE("scale_split partitions exactly at every cutoff") {
    SplitMix64 rng(24);
    const GridFn f = random_fn(6, rng, false);
    const std::int64_t n = f.cells();
    for (std::int64_t cutoff = 1; cutoff <= n; ++cutoff) {
        const ScaleSplit s = scale_split(f, cutoff);
        for (std::size_t i = 0; i < f.values.size(); ++i)
            CHECK(s.small_scales.values[i] + s.large_scales.values[i] ==
                  doctest::Approx(f.values[i]).epsilon(1e-12));
    }
    // finest cutoff: no strictly smaller scales exist
    const ScaleSplit finest = scale_split(f, 1);
    for (double v : finest.small_scales.values) CHECK(v == doctest::Approx(0.0));
    // full-circle cutoff: the large part is the conditional mean on halves
    const ScaleSplit coarsest = scale_split(f, n);
    const GridFn halves = conditional_mean(f, 1);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(coarsest.large_scales.values[i] == doctest::Approx(halves.values[i]));
}

TEST_CASE("carleson_constant: hand values and the mean-zero gate") {
    CHECK(carleson_constant(GridFn{1, {1.0, -1.0}}) == doctest::Approx(1.0));
    CHECK(carleson_constant(GridFn{3, std::vector<double>(8, 0.0)}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(carleson_constant(GridFn{1, {1.0, 0.0}}), std::invalid_argument);

    // single coefficient on [0, 1/2): containing intervals give 2 and 1
    HaarCoeffs c;
    c.resolution = 3;
    c.mean = 0.0;
    c.levels = {{0.0}, {1.0, 0.0}, {0.0, 0.0, 0.0, 0.0}};
    const GridFn f = haar_reconstruct(c);
    CHECK(carleson_constant(f) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("carleson grid-arc sweep matches a direct packing oracle") {
    SplitMix64 rng(25);
    for (int trial = 0; trial < 3; ++trial) {
        const GridFn f = random_fn(5, rng, true);
        const std::int64_t n = f.cells();
        const HaarCoeffs c = haar_analyze(f);
        double oracle = 0.0;
        for (const Arc q : enumerate_arcs(5, n)) {
            double packing = 0.0;
            for (const auto& I : dyadic_intervals(5)) {
                if (I.level == 5) continue;
                const Arc a = I.as_arc(5);
                // containment of the non-wrapping dyadic a in the arc q
                const std::int64_t rel = mod_cells(a.start - q.start, n);
                if (rel + a.length <= q.length) packing += c.coeff(I) * c.coeff(I);
            }
            oracle = std::max(oracle,
                              packing * static_cast<double>(n) / static_cast<double>(q.length));
        }
        CHECK(carleson_constant(f, true) == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(carleson_constant(f, true) >= carleson_constant(f) - 1e-12);
    }
}

TEST_CASE("empirical_ca_cb: zero family, collapse, and the direct oracle") {
    const int res = 4;
    const std::int64_t n = 1 << res;
    std::vector<GridFn> zeros(static_cast<std::size_t>(n),
                              GridFn{res, std::vector<double>(static_cast<std::size_t>(n), 0.0)});
    const CaCb z = empirical_ca_cb(zeros, {}, Arc{0, n});
    CHECK(z.ca == doctest::Approx(0.0));
    CHECK(z.cb == doctest::Approx(0.0));

    // constant-in-t family: the shifted average collapses to the circle mean
    SplitMix64 rng(26);
    GridFn phi{res, std::vector<double>(static_cast<std::size_t>(n))};
    {
        long double acc = 0.0L;
        for (auto& v : phi.values) {
            v = rng.uniform(-1.0, 1.0);
            acc += v;
        }
        const double mean = static_cast<double>(acc / static_cast<long double>(n));
        for (auto& v : phi.values) v -= mean;
    }
    std::vector<GridFn> constant_family(static_cast<std::size_t>(n), phi);
    const CaCb flat = empirical_ca_cb(constant_family, {}, Arc{0, n});
    CHECK(flat.ca < 1e-24);
    CHECK(flat.cb < 1e-12);

    // singleton mask: the average is phi itself; check against direct sums
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(n), 0);
    mask[0] = 1;
    const Arc q{3, 7};
    const CaCb got = empirical_ca_cb(constant_family, mask, q);
    const ScaleSplit split = scale_split(phi, q.length);
    long double ca_acc = 0.0L;
    for (std::int64_t k = 0; k < q.length; ++k) {
        const double v = split.small_scales.values[static_cast<std::size_t>((q.start + k) % n)];
        ca_acc += static_cast<long double>(v) * v;
    }
    CHECK(got.ca == doctest::Approx(static_cast<double>(ca_acc / q.length)).epsilon(1e-12));
    double cb_oracle = 0.0;
    for (std::int64_t k0 = 0; k0 < q.length; ++k0) {
        long double acc = 0.0L;
        const double b0 =
            split.large_scales.values[static_cast<std::size_t>((q.start + k0) % n)];
        for (std::int64_t k = 0; k < q.length; ++k)
            acc += std::fabs(
                split.large_scales.values[static_cast<std::size_t>((q.start + k) % n)] - b0);
        cb_oracle = std::max(cb_oracle, static_cast<double>(acc / q.length));
    }
    CHECK(got.cb == doctest::Approx(cb_oracle).epsilon(1e-12));
    CHECK(got.ca > 0.0);
    CHECK(std::isfinite(got.cb));

    CHECK_THROWS_AS(empirical_ca_cb(constant_family, {}, Arc{0, n + 1}), std::invalid_argument);
    std::vector<GridFn> not_zero = constant_family;
    not_zero[2].values[0] += 1.0;
    CHECK_THROWS_AS(empirical_ca_cb(not_zero, {}, Arc{0, n}), std::invalid_argument);
}

TEST_CASE("ca_cb_envelope equals the per-arc maximum of empirical_ca_cb") {
    SplitMix64 rng(27);
    const int res = 4;
    const std::int64_t n = 1 << res;
    std::vector<GridFn> phis;
    for (std::int64_t i = 0; i < n; ++i) {
        GridFn f{res, std::vector<double>(static_cast<std::size_t>(n))};
        long double acc = 0.0L;
        for (auto& v : f.values) {
            v = rng.uniform(-1.0, 1.0);
            acc += v;
        }
        const double mean = static_cast<double>(acc / static_cast<long double>(n));
        for (auto& v : f.values) v -= mean;
        phis.push_back(std::move(f));
    }
    CaCb direct{0.0, 0.0};
    for (const Arc q : enumerate_arcs(res, n)) {
        const CaCb per_arc = empirical_ca_cb(phis, {}, q);
        direct.ca = std::max(direct.ca, per_arc.ca);
        direct.cb = std::max(direct.cb, per_arc.cb);
    }
    const CaCb swept = ca_cb_envelope(phis, {});
    CHECK(swept.ca == doctest::Approx(direct.ca).epsilon(1e-12));
    CHECK(swept.cb == doctest::Approx(direct.cb).epsilon(1e-12));
}

TEST_CASE("empirical ca/cb stays stable across resolutions on cascade logs") {
    auto family_cacb = [](int res, std::uint64_t seed) {
        const WeightFamily fam = cascade_family(res, 0.3, seed);
        const auto [normalized, record] = normalize_logmean(fam);
        return ca_cb_envelope(member_logs(normalized), normalized.mask);
    };
    const CaCb c8 = family_cacb(8, 99);
    const CaCb c10 = family_cacb(10, 99);
    CHECK(std::isfinite(c8.ca));
    CHECK(std::isfinite(c8.cb));
    CHECK(c10.ca <= 1.2 * c8.ca + 0.05);
    CHECK(c10.ca >= c8.ca / 1.2 - 0.05);
    CHECK(c10.cb <= 1.2 * c8.cb + 0.05);
}
