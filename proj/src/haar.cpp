#include "mlab/haar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mlab {

namespace {

int ceil_log2(std::int64_t x) {
    int k = 0;
    while ((std::int64_t{1} << k) < x) ++k;
    return k;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

void require_mean_zero(const GridFn& f, double tol, const char* who) {
    long double acc = 0.0L;
    for (double x : f.values) acc += x;
    const double mean = static_cast<double>(acc / static_cast<long double>(f.cells()));
    if (std::fabs(mean) > tol * std::max(1.0, max_abs(f.values)))
        throw std::invalid_argument(std::string(who) + ": input must have mean zero, mean = " +
                                    std::to_string(mean));
}

// Mean pyramid: level N holds cell values, each coarser entry the mean of its
// two children.
std::vector<std::vector<double>> mean_pyramid(const GridFn& f) {
    std::vector<std::vector<double>> m(static_cast<std::size_t>(f.resolution + 1));
    m[static_cast<std::size_t>(f.resolution)] = f.values;
    for (int k = f.resolution - 1; k >= 0; --k) {
        const auto& fine = m[static_cast<std::size_t>(k + 1)];
        auto& row = m[static_cast<std::size_t>(k)];
        row.resize(fine.size() / 2);
        for (std::size_t j = 0; j < row.size(); ++j)
            row[j] = 0.5 * (fine[2 * j] + fine[2 * j + 1]);
    }
    return m;
}

}  // namespace

HaarCoeffs haar_analyze(const GridFn& f) {
    const int N = f.resolution;
    const auto m = mean_pyramid(f);
    HaarCoeffs c;
    c.resolution = N;
    c.mean = m[0][0];
    c.levels.resize(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) {
        const auto& fine = m[static_cast<std::size_t>(k + 1)];
        auto& row = c.levels[static_cast<std::size_t>(k)];
        row.resize(std::size_t{1} << k);
        // (f, h_I) = |I|^{1/2} (mean_left - mean_right) / 2 with |I| = 2^-k.
        const double half_root = 0.5 * std::exp2(-0.5 * k);
        for (std::size_t j = 0; j < row.size(); ++j)
            row[j] = half_root * (fine[2 * j] - fine[2 * j + 1]);
    }
    return c;
}

GridFn haar_reconstruct(const HaarCoeffs& c) {
    const int N = c.resolution;
    std::vector<double> cur{c.mean};
    for (int k = 0; k < N; ++k) {
        const auto& row = c.levels[static_cast<std::size_t>(k)];
        std::vector<double> next(cur.size() * 2);
        // mean_left/right = mean_I +- (f, h_I) |I|^{-1/2}, |I| = 2^-k.
        const double inv_root = std::exp2(0.5 * k);
        for (std::size_t j = 0; j < cur.size(); ++j) {
            const double bump = row[j] * inv_root;
            next[2 * j] = cur[j] + bump;
            next[2 * j + 1] = cur[j] - bump;
        }
        cur = std::move(next);
    }
    return GridFn{N, std::move(cur)};
}

GridFn conditional_mean(const GridFn& f, int level) {
    if (level < 0 || level > f.resolution)
        throw std::invalid_argument("conditional_mean: level out of range");
    const auto m = mean_pyramid(f);
    const auto& row = m[static_cast<std::size_t>(level)];
    GridFn out{f.resolution, std::vector<double>(f.values.size())};
    const std::int64_t step = std::int64_t{1} << (f.resolution - level);
    for (std::int64_t c = 0; c < f.cells(); ++c)
        out.values[static_cast<std::size_t>(c)] = row[static_cast<std::size_t>(c / step)];
    return out;
}

ScaleSplit scale_split(const GridFn& f, std::int64_t cutoff_cells) {
    const std::int64_t n = f.cells();
    if (cutoff_cells < 1 || cutoff_cells > n)
        throw std::invalid_argument("scale_split: cutoff out of range");
    // Coefficient level j goes to large_scales iff 2^{N-j} >= cutoff, so the
    // large part is the conditional mean at level N - ceil(log2 cutoff) + 1.
    const int level = std::min(f.resolution, f.resolution - ceil_log2(cutoff_cells) + 1);
    GridFn large = conditional_mean(f, level);
    GridFn small{f.resolution, std::vector<double>(f.values.size())};
    for (std::size_t i = 0; i < f.values.size(); ++i)
        small.values[i] = f.values[i] - large.values[i];
    return ScaleSplit{std::move(small), std::move(large)};
}

namespace {

// tail[k][j] = sum of squared coefficients over dyadic J inside (k, j).
std::vector<std::vector<double>> coeff_tail_sums(const HaarCoeffs& c) {
    const int N = c.resolution;
    std::vector<std::vector<double>> tail(static_cast<std::size_t>(N + 1));
    tail[static_cast<std::size_t>(N)].assign(std::size_t{1} << N, 0.0);
    for (int k = N - 1; k >= 0; --k) {
        const auto& fine = tail[static_cast<std::size_t>(k + 1)];
        const auto& row = c.levels[static_cast<std::size_t>(k)];
        auto& t = tail[static_cast<std::size_t>(k)];
        t.resize(std::size_t{1} << k);
        for (std::size_t j = 0; j < t.size(); ++j)
            t[j] = row[j] * row[j] + fine[2 * j] + fine[2 * j + 1];
    }
    return tail;
}

// Greedy maximal-dyadic-block decomposition of the cell range [a, b).
template <class Visit>
void for_each_maximal_block(std::int64_t a, std::int64_t b, Visit visit) {
    while (a < b) {
        std::int64_t size = a == 0 ? (b - a) : (a & -a);
        while (size > b - a) size >>= 1;
        // clip to a power of two
        std::int64_t p = 1;
        while (p * 2 <= size) p *= 2;
        size = p;
        visit(a, size);
        a += size;
    }
}

}  // namespace

double carleson_constant(const GridFn& f, bool sweep_grid_arcs) {
    require_mean_zero(f, 1e-12, "carleson_constant");
    const int N = f.resolution;
    const std::int64_t n = f.cells();
    const auto c = haar_analyze(f);
    const auto tail = coeff_tail_sums(c);
    double best = 0.0;
    for (int k = 0; k < N; ++k) {
        const double inv_measure = std::exp2(k);  // 1 / |I|
        for (double t : tail[static_cast<std::size_t>(k)])
            best = std::max(best, t * inv_measure);
    }
    if (!sweep_grid_arcs || N == 0) return best;

    // Packing sum of a cell range = sum of tails over its maximal dyadic
    // blocks; every dyadic J inside the range lies in exactly one block.
    auto range_packing = [&](std::int64_t a, std::int64_t b) {
        double acc = 0.0;
        for_each_maximal_block(a, b, [&](std::int64_t start, std::int64_t size) {
            int level = N;
            std::int64_t s = size;
            while (s > 1) {
                s >>= 1;
                --level;
            }
            acc += tail[static_cast<std::size_t>(level)]
                       [static_cast<std::size_t>(start >> (N - level))];
        });
        return acc;
    };
    for (std::int64_t len = 1; len <= n; ++len) {
        const double inv_measure = static_cast<double>(n) / static_cast<double>(len);
        const std::int64_t starts = len == n ? 1 : n;
        for (std::int64_t s = 0; s < starts; ++s) {
            const std::int64_t e = s + len;
            const double packing =
                e <= n ? range_packing(s, e) : range_packing(s, n) + range_packing(0, e - n);
            best = std::max(best, packing * inv_measure);
        }
    }
    return best;
}

namespace {

struct FamilySplit {
    GridFn phi;       // translation-average of the members
    GridFn phi_large;  // translation-average of the members' large-scale parts
};

void check_family(std::span<const GridFn> phis, std::span<const std::uint8_t> mask) {
    if (phis.empty()) throw std::invalid_argument("ca_cb: empty family");
    const std::int64_t n = phis[0].cells();
    if (static_cast<std::int64_t>(phis.size()) != n)
        throw std::invalid_argument("ca_cb: member count must equal cell count");
    for (const auto& phi : phis) require_mean_zero(phi, 1e-9, "ca_cb");
    if (!mask.empty() && mask.size() != phis.size())
        throw std::invalid_argument("ca_cb: mask length mismatch");
}

// Average of the members' conditional means at `level`, shifted like the
// members themselves.
GridFn averaged_conditional(std::span<const GridFn> phis, std::span<const std::uint8_t> mask,
                            int level) {
    std::vector<GridFn> parts;
    parts.reserve(phis.size());
    for (const auto& phi : phis) parts.push_back(conditional_mean(phi, level));
    return shifted_average(parts, mask);
}

int split_level(int resolution, std::int64_t cutoff_cells) {
    return std::min(resolution, resolution - ceil_log2(cutoff_cells) + 1);
}

}  // namespace

CaCb empirical_ca_cb(std::span<const GridFn> phis, std::span<const std::uint8_t> mask, Arc q) {
    check_family(phis, mask);
    const std::int64_t n = phis[0].cells();
    if (q.length < 1 || q.length > n || q.start < 0 || q.start >= n)
        throw std::invalid_argument("ca_cb: invalid arc");
    const GridFn phi = shifted_average(phis, mask);
    const GridFn large = averaged_conditional(phis, mask, split_level(phis[0].resolution, q.length));

    long double ca_acc = 0.0L;
    for (std::int64_t k = 0; k < q.length; ++k) {
        const double a = phi.values[static_cast<std::size_t>(mod_cells(q.start + k, n))] -
                         large.values[static_cast<std::size_t>(mod_cells(q.start + k, n))];
        ca_acc += static_cast<long double>(a) * a;
    }
    const double ca = static_cast<double>(ca_acc / static_cast<long double>(q.length));

    double cb = 0.0;
    for (std::int64_t k0 = 0; k0 < q.length; ++k0) {
        const double b0 = large.values[static_cast<std::size_t>(mod_cells(q.start + k0, n))];
        long double acc = 0.0L;
        for (std::int64_t k = 0; k < q.length; ++k)
            acc += std::fabs(large.values[static_cast<std::size_t>(mod_cells(q.start + k, n))] - b0);
        cb = std::max(cb, static_cast<double>(acc / static_cast<long double>(q.length)));
    }
    return CaCb{ca, cb};
}

CaCb ca_cb_envelope(std::span<const GridFn> phis, std::span<const std::uint8_t> mask) {
    check_family(phis, mask);
    const std::int64_t n = phis[0].cells();
    const int N = phis[0].resolution;
    const GridFn phi = shifted_average(phis, mask);

    double ca = 0.0;
    double cb = 0.0;
    int cached_level = -1;
    GridFn large;
    CyclicPrefix p_sq;
    CyclicPrefix p_b;
    for (std::int64_t len = 1; len <= n; ++len) {
        const int level = split_level(N, len);
        if (level != cached_level) {
            large = averaged_conditional(phis, mask, level);
            cached_level = level;
            std::vector<double> small_sq(static_cast<std::size_t>(n));
            for (std::int64_t i = 0; i < n; ++i) {
                const double a = phi.values[static_cast<std::size_t>(i)] -
                                 large.values[static_cast<std::size_t>(i)];
                small_sq[static_cast<std::size_t>(i)] = a * a;
            }
            p_sq = CyclicPrefix(small_sq);
            p_b = CyclicPrefix(large.values);
        }
        const auto bmin = cyclic_window_min(large.values, len);
        const auto bmax = cyclic_window_max(large.values, len);
        const std::int64_t starts = len == n ? 1 : n;
        for (std::int64_t s = 0; s < starts; ++s) {
            ca = std::max(ca, p_sq.mean(s, len));
            // sup_{x0} avg |phi_B - phi_B(x0)| is attained where phi_B hits
            // its window min or max.
            const double m = p_b.mean(s, len);
            cb = std::max(cb, std::max(m - bmin[static_cast<std::size_t>(s)],
                                       bmax[static_cast<std::size_t>(s)] - m));
        }
    }
    return CaCb{ca, cb};
}

}  // namespace mlab
