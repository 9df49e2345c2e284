#include "doctest.h"

#include <cmath>
#include <set>
#include <cstdlib>
#include <stdexcept>

#include "mlab/constants.hpp"
#include "mlab/families.hpp"
#include "mlab/grid.hpp"

using namespace mlab;

TEST_CASE("make_weight validates values") {
    CHECK_NOTHROW(make_weight(1, {1.0, 3.0}));
    CHECK_NOTHROW(make_weight(2, {1.0, 2.0, 3.0, 4.0}));
    CHECK_THROWS_WITH_AS(make_weight(1, {1.0, 0.0}),
                         doctest::Contains("index 1"), std::invalid_argument);
    CHECK_THROWS_AS(make_weight(1, {1.0, -2.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_weight(2, {1.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_weight(1, {1.0, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(make_weight(1, {1.0, INFINITY}), std::invalid_argument);
}

TEST_CASE("arc_average matches hand values and wraps") {
    const Weight w = make_weight(2, {1.0, 2.0, 3.0, 4.0});
    CHECK(arc_average(w, {1, 2}) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(arc_average(w, {3, 2}) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(arc_average(make_weight(1, {1.0, 3.0}), {0, 2}) == doctest::Approx(2.0));
    CHECK(arc_average(w, {0, 4}) == doctest::Approx(2.5));  // grand mean
}

TEST_CASE("translate shifts cyclically and composes") {
    const Weight w = make_weight(2, {1.0, 2.0, 3.0, 4.0});
    const Weight t1 = translate(w, 1);
    CHECK(t1.values == std::vector<double>{4.0, 1.0, 2.0, 3.0});
    CHECK(translate(make_weight(1, {1.0, 3.0}), 2).values == std::vector<double>{1.0, 3.0});
    SplitMix64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const std::int64_t a = static_cast<std::int64_t>(rng.next() % 11) - 5;
        const std::int64_t b = static_cast<std::int64_t>(rng.next() % 11) - 5;
        CHECK(translate(translate(w, a), b).values == translate(w, a + b).values);
    }
    CHECK(translate(w, 0).values == w.values);
}

TEST_CASE("arc_average is translation equivariant") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const int n_res = 5;
        const std::int64_t n = 1 << n_res;
        std::vector<double> vals(static_cast<std::size_t>(n));
        for (auto& v : vals) v = rng.uniform(0.1, 10.0);
        const Weight w = make_weight(n_res, vals);
        const std::int64_t s = static_cast<std::int64_t>(rng.next() % 32);
        const Weight ws = translate(w, s);
        for (const Arc q : enumerate_arcs(n_res, n)) {
            const Arc shifted{mod_cells(q.start - s, n), q.length};
            CHECK(arc_average(ws, q) ==
                  doctest::Approx(arc_average(w, shifted)).epsilon(1e-13));
        }
    }
}

TEST_CASE("enumerate_arcs emits each arc once with canonical full circle") {
    const auto small = enumerate_arcs(1, 2);
    REQUIRE(small.size() == 3);
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (const Arc q : small) seen.insert({q.start, q.length});
    CHECK(seen == std::set<std::pair<std::int64_t, std::int64_t>>{{0, 1}, {1, 1}, {0, 2}});

    CHECK(enumerate_arcs(2, 4).size() == 13);  // 4 + 4 + 4 partial + 1 full
    CHECK(enumerate_arcs(2, 1).size() == 4);
}

TEST_CASE("dyadic_intervals counts all levels") {
    CHECK(dyadic_intervals(0).size() == 1);
    CHECK(dyadic_intervals(2).size() == 7);
    CHECK(dyadic_intervals(3).size() == 15);
    const auto all = dyadic_intervals(2);
    // every dyadic interval is a grid arc
    for (const auto& I : all) {
        const Arc q = I.as_arc(2);
        CHECK(q.start >= 0);
        CHECK(q.start + q.length <= 4);
    }
}

TEST_CASE("prefix sums agree with naive summation on every arc") {
    SplitMix64 rng(3);
    for (int n_res = 1; n_res <= 8; ++n_res) {
        const std::int64_t n = std::int64_t{1} << n_res;
        std::vector<double> vals(static_cast<std::size_t>(n));
        for (auto& v : vals) v = rng.uniform(1e-3, 1e3);
        const CyclicPrefix pre(vals);
        for (const Arc q : enumerate_arcs(n_res, n)) {
            long double naive = 0.0L;
            for (std::int64_t k = 0; k < q.length; ++k)
                naive += vals[static_cast<std::size_t>(mod_cells(q.start + k, n))];
            const double m = static_cast<double>(naive / static_cast<long double>(q.length));
            CHECK(pre.mean(q.start, q.length) == doctest::Approx(m).epsilon(1e-12));
        }
    }
}

TEST_CASE("shifted_average reassembles translate families and honors masks") {
    SplitMix64 rng(5);
    const int n_res = 4;
    const std::int64_t n = 1 << n_res;
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (auto& v : vals) v = rng.uniform(-1.0, 1.0);
    const GridFn f{n_res, vals};

    std::vector<GridFn> members;
    for (std::int64_t i = 0; i < n; ++i) members.push_back(translate(f, i));
    const GridFn avg = shifted_average(members, {});
    for (std::int64_t c = 0; c < n; ++c)
        CHECK(avg.values[static_cast<std::size_t>(c)] ==
              doctest::Approx(f.values[static_cast<std::size_t>(c)]).epsilon(1e-13));

    std::vector<std::uint8_t> mask(static_cast<std::size_t>(n), 0);
    mask[3] = 1;
    const GridFn single = shifted_average(members, mask);
    for (std::int64_t c = 0; c < n; ++c)
        CHECK(single.values[static_cast<std::size_t>(c)] ==
              doctest::Approx(members[3].values[static_cast<std::size_t>(mod_cells(c + 3, n))]));

    mask.assign(static_cast<std::size_t>(n), 0);
    CHECK_THROWS_AS(shifted_average(members, mask), std::invalid_argument);
}

TEST_CASE("coarsen preserves integrals") {
    SplitMix64 rng(9);
    std::vector<double> vals(64);
    for (auto& v : vals) v = rng.uniform(0.5, 2.0);
    const Weight w = make_weight(6, vals);
    const Weight c = coarsen(w, 2);
    REQUIRE(c.resolution == 4);
    CHECK(arc_average(c, {0, 16}) == doctest::Approx(arc_average(w, {0, 64})).epsilon(1e-14));
    for (std::int64_t j = 0; j < 16; ++j)
        CHECK(c.values[static_cast<std::size_t>(j)] ==
              doctest::Approx(arc_average(w, {4 * j, 4})).epsilon(1e-14));
}

TEST_CASE("parallel sweeps match serial sweeps bitwise") {
    SplitMix64 rng(15);
    std::vector<double> vals(256);
    for (auto& v : vals) v = rng.uniform(0.2, 5.0);
    const Weight w = make_weight(8, vals);
    auto with_threads = [&](const char* count) {
        setenv("MLAB_THREADS", count, 1);
        struct Restore {
            ~Restore() { unsetenv("MLAB_THREADS"); }
        } restore;
        std::vector<double> out;
        for (double p : {1.0, 2.0}) out.push_back(ap_constant(w, p, Scope::GridArcs));
        out.push_back(doubling_constant(w, Scope::GridArcs));
        out.push_back(bmo_norm(log_values(w), Scope::GridArcs, 2));
        return out;
    };
    const auto serial = with_threads("1");
    const auto threaded = with_threads("4");
    CHECK(serial == threaded);
}

TEST_CASE("cyclic window extrema match direct scans") {
    SplitMix64 rng(13);
    std::vector<double> vals(48);
    for (auto& v : vals) v = rng.uniform(-5.0, 5.0);
    // non-power-of-two length exercises the wrap logic on its own
    for (std::int64_t window : {1, 2, 5, 17, 48}) {
        const auto mins = cyclic_window_min(vals, window);
        const auto maxs = cyclic_window_max(vals, window);
        for (std::int64_t s = 0; s < 48; ++s) {
            double lo = vals[static_cast<std::size_t>(s)], hi = lo;
            for (std::int64_t k = 1; k < window; ++k) {
                const double v = vals[static_cast<std::size_t>((s + k) % 48)];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            CHECK(mins[static_cast<std::size_t>(s)] == lo);
            CHECK(maxs[static_cast<std::size_t>(s)] == hi);
        }
    }
}
