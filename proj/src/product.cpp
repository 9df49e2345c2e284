#include "mlab/product.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "mlab/parallel.hpp"

namespace mlab {

namespace {

// Prefix sums over the doubled n x n torus grid; rectangle sums in O(1).
class Cyclic2DPrefix {
public:
    Cyclic2DPrefix() = default;
    Cyclic2DPrefix(std::span<const double> values, std::int64_t n) : n_(n) {
        const std::int64_t m = 2 * n + 1;
        pre_.assign(static_cast<std::size_t>(m * m), 0.0L);
        for (std::int64_t i = 0; i < 2 * n; ++i) {
            long double row = 0.0L;
            for (std::int64_t j = 0; j < 2 * n; ++j) {
                row += values[static_cast<std::size_t>((i % n) * n + (j % n))];
                pre_[idx(i + 1, j + 1)] = pre_[idx(i, j + 1)] + row;
            }
        }
    }

    double sum(std::int64_t sx, std::int64_t sy, std::int64_t lx, std::int64_t ly) const {
        sx = mod_cells(sx, n_);
        sy = mod_cells(sy, n_);
        return static_cast<double>(pre_[idx(sx + lx, sy + ly)] - pre_[idx(sx, sy + ly)] -
                                   pre_[idx(sx + lx, sy)] + pre_[idx(sx, sy)]);
    }

    double mean(std::int64_t sx, std::int64_t sy, std::int64_t lx, std::int64_t ly) const {
        return sum(sx, sy, lx, ly) / (static_cast<double>(lx) * static_cast<double>(ly));
    }

private:
    std::size_t idx(std::int64_t i, std::int64_t j) const {
        return static_cast<std::size_t>(i * (2 * n_ + 1) + j);
    }
    std::int64_t n_ = 0;
    std::vector<long double> pre_;
};

std::vector<double> log_values_of(std::span<const double> v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::log(v[i]);
    return out;
}

std::vector<double> pow_values(std::span<const double> v, double e) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::pow(v[i], e);
    return out;
}

// Per-axis sliding extrema of a row of length n (cyclic).
template <class Better>
void window_extreme_row(const double* v, std::int64_t n, std::int64_t window, double* out,
                        Better better) {
    std::deque<std::int64_t> dq;
    for (std::int64_t j = 0; j < n + window - 1; ++j) {
        const double val = v[j % n];
        while (!dq.empty() && !better(v[dq.back() % n], val)) dq.pop_back();
        dq.push_back(j);
        if (dq.front() <= j - window) dq.pop_front();
        if (j >= window - 1 && j - window + 1 < n) out[j - window + 1] = v[dq.front() % n];
    }
}

// Rectangle extrema for a fixed (lx, ly): first slide along y per row, then
// along x per column. out[sx * n + sy] = extremum over the lx x ly rectangle.
template <class Better>
void rect_extreme(std::span<const double> v, std::int64_t n, std::int64_t lx, std::int64_t ly,
                  std::vector<double>& tmp, std::vector<double>& out, Better better) {
    tmp.resize(v.size());
    out.resize(v.size());
    for (std::int64_t i = 0; i < n; ++i)
        window_extreme_row(v.data() + i * n, n, ly, tmp.data() + i * n, better);
    // slide along x within each column of tmp
    std::vector<double> col(static_cast<std::size_t>(n)), res(static_cast<std::size_t>(n));
    for (std::int64_t j = 0; j < n; ++j) {
        for (std::int64_t i = 0; i < n; ++i)
            col[static_cast<std::size_t>(i)] = tmp[static_cast<std::size_t>(i * n + j)];
        window_extreme_row(col.data(), n, lx, res.data(), better);
        for (std::int64_t i = 0; i < n; ++i)
            out[static_cast<std::size_t>(i * n + j)] = res[static_cast<std::size_t>(i)];
    }
}

// Dyadic pyramid over rectangles: table(kx, ky) has 2^kx * 2^ky entries.
class DyadicTable2D {
public:
    template <class Combine>
    DyadicTable2D(std::span<const double> values, int resolution, Combine combine)
        : resolution_(resolution) {
        rows_.resize(static_cast<std::size_t>((resolution + 1) * (resolution + 1)));
        const std::int64_t n = std::int64_t{1} << resolution;
        at(resolution, resolution).assign(values.begin(), values.end());
        for (int ky = resolution - 1; ky >= 0; --ky) {
            const auto& fine = at(resolution, ky + 1);
            auto& row = at(resolution, ky);
            const std::int64_t cols = std::int64_t{1} << ky;
            row.resize(static_cast<std::size_t>(n * cols));
            for (std::int64_t i = 0; i < n; ++i)
                for (std::int64_t j = 0; j < cols; ++j)
                    row[static_cast<std::size_t>(i * cols + j)] =
                        combine(fine[static_cast<std::size_t>(i * 2 * cols + 2 * j)],
                                fine[static_cast<std::size_t>(i * 2 * cols + 2 * j + 1)]);
        }
        for (int ky = 0; ky <= resolution; ++ky) {
            const std::int64_t cols = std::int64_t{1} << ky;
            for (int kx = resolution - 1; kx >= 0; --kx) {
                const auto& fine = at(kx + 1, ky);
                auto& row = at(kx, ky);
                const std::int64_t rows = std::int64_t{1} << kx;
                row.resize(static_cast<std::size_t>(rows * cols));
                for (std::int64_t i = 0; i < rows; ++i)
                    for (std::int64_t j = 0; j < cols; ++j)
                        row[static_cast<std::size_t>(i * cols + j)] =
                            combine(fine[static_cast<std::size_t>(2 * i * cols + j)],
                                    fine[static_cast<std::size_t>((2 * i + 1) * cols + j)]);
            }
        }
    }

    double entry(int kx, int ky, std::int64_t jx, std::int64_t jy) const {
        return at(kx, ky)[static_cast<std::size_t>(jx * (std::int64_t{1} << ky) + jy)];
    }

    double mean(int resolution, int kx, int ky, std::int64_t jx, std::int64_t jy) const {
        const double count =
            std::ldexp(1.0, (resolution - kx) + (resolution - ky));
        return entry(kx, ky, jx, jy) / count;
    }

private:
    std::vector<double>& at(int kx, int ky) {
        return rows_[static_cast<std::size_t>(kx * (resolution_ + 1) + ky)];
    }
    const std::vector<double>& at(int kx, int ky) const {
        return rows_[static_cast<std::size_t>(kx * (resolution_ + 1) + ky)];
    }
    int resolution_;
    std::vector<std::vector<double>> rows_;
};

double add2(double a, double b) { return a + b; }
double min2(double a, double b) { return std::min(a, b); }
double max2(double a, double b) { return std::max(a, b); }

// sup over all dyadic rectangle pairs of functional(kx, ky, jx, jy).
template <class Functional>
double sweep_dyadic_2d(int resolution, int min_level, Functional functional) {
    double best = -std::numeric_limits<double>::infinity();
    for (int kx = min_level; kx <= resolution; ++kx)
        for (int ky = min_level; ky <= resolution; ++ky)
            for (std::int64_t jx = 0; jx < (std::int64_t{1} << kx); ++jx)
                for (std::int64_t jy = 0; jy < (std::int64_t{1} << ky); ++jy)
                    best = std::max(best, functional(kx, ky, jx, jy));
    return best;
}

// sup over all grid rectangles; per_shape(lx, ly) returns the sup over all
// starts for that shape. Parallel over lx.
template <class PerShape>
double sweep_rect_shapes(std::int64_t max_len, PerShape per_shape) {
    return parallel_max(1, max_len + 1, [&](std::int64_t lx) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::int64_t ly = 1; ly <= max_len; ++ly) best = std::max(best, per_shape(lx, ly));
        return best;
    });
}

}  // namespace

Weight2D make_weight_2d(int resolution, std::vector<double> values) {
    if (resolution < 0 || resolution > 15)
        throw std::invalid_argument("weight2d: resolution must be in [0, 15]");
    const std::int64_t n = std::int64_t{1} << resolution;
    if (static_cast<std::int64_t>(values.size()) != n * n)
        throw std::invalid_argument("weight2d: expected " + std::to_string(n * n) +
                                    " values, got " + std::to_string(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw std::invalid_argument("weight2d: value at index " + std::to_string(i) +
                                        " is not finite");
        if (values[i] <= 0.0)
            throw std::invalid_argument("weight2d: value at index " + std::to_string(i) +
                                        " is not positive");
    }
    return Weight2D{resolution, std::move(values)};
}

Weight2D tensor_weight(const Weight& u, const Weight& v) {
    if (u.resolution != v.resolution)
        throw std::invalid_argument("tensor_weight: resolution mismatch");
    const std::int64_t n = u.cells();
    std::vector<double> vals(static_cast<std::size_t>(n * n));
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j)
            vals[static_cast<std::size_t>(i * n + j)] =
                u.values[static_cast<std::size_t>(i)] * v.values[static_cast<std::size_t>(j)];
    return make_weight_2d(u.resolution, std::move(vals));
}

WeightFamily2D make_family_2d(std::vector<Weight2D> members, std::vector<std::uint8_t> mask) {
    if (members.empty()) throw std::invalid_argument("family2d: no members");
    const int resolution = members[0].resolution;
    const std::int64_t n = std::int64_t{1} << resolution;
    if (static_cast<std::int64_t>(members.size()) != n * n)
        throw std::invalid_argument("family2d: expected " + std::to_string(n * n) + " members");
    for (std::size_t i = 0; i < members.size(); ++i)
        if (members[i].resolution != resolution)
            throw std::invalid_argument("family2d: member " + std::to_string(i) +
                                        " has mismatched resolution");
    if (mask.empty()) mask.assign(members.size(), 1);
    if (mask.size() != members.size())
        throw std::invalid_argument("family2d: mask length mismatch");
    std::int64_t active = 0;
    for (auto b : mask) active += b ? 1 : 0;
    if (active == 0) throw std::invalid_argument("family2d: mask selects no members");
    return WeightFamily2D{resolution, std::move(members), std::move(mask)};
}

double rect_average(const Weight2D& w, Arc qx, Arc qy) {
    const std::int64_t n = w.side();
    for (Arc q : {qx, qy})
        if (q.length < 1 || q.length > n || q.start < 0 || q.start >= n)
            throw std::invalid_argument("rect_average: invalid arc");
    const Cyclic2DPrefix pre(w.values, n);
    return pre.mean(qx.start, qy.start, qx.length, qy.length);
}

double ap_constant_2d(const Weight2D& w, double p, Scope scope) {
    if (!(p >= 1.0)) throw std::invalid_argument("ap_constant_2d: p must be >= 1");
    const std::int64_t n = w.side();

    if (scope == Scope::Dyadic) {
        const DyadicTable2D sums(w.values, w.resolution, add2);
        if (p == 1.0) {
            const DyadicTable2D mins(w.values, w.resolution, min2);
            return sweep_dyadic_2d(w.resolution, 0, [&](int kx, int ky, std::int64_t jx,
                                                        std::int64_t jy) {
                return sums.mean(w.resolution, kx, ky, jx, jy) / mins.entry(kx, ky, jx, jy);
            });
        }
        if (std::isinf(p)) {
            const DyadicTable2D logs(log_values_of(w.values), w.resolution, add2);
            return sweep_dyadic_2d(w.resolution, 0, [&](int kx, int ky, std::int64_t jx,
                                                        std::int64_t jy) {
                return sums.mean(w.resolution, kx, ky, jx, jy) *
                       std::exp(-logs.mean(w.resolution, kx, ky, jx, jy));
            });
        }
        const DyadicTable2D invs(pow_values(w.values, -1.0 / (p - 1.0)), w.resolution, add2);
        return sweep_dyadic_2d(w.resolution, 0,
                               [&](int kx, int ky, std::int64_t jx, std::int64_t jy) {
                                   return sums.mean(w.resolution, kx, ky, jx, jy) *
                                          std::pow(invs.mean(w.resolution, kx, ky, jx, jy),
                                                   p - 1.0);
                               });
    }

    const Cyclic2DPrefix pw(w.values, n);
    if (p == 1.0) {
        return sweep_rect_shapes(n, [&](std::int64_t lx, std::int64_t ly) {
            std::vector<double> tmp, mins;
            rect_extreme(w.values, n, lx, ly, tmp, mins,
                         [](double a, double b) { return a < b; });
            const std::int64_t sx_count = lx == n ? 1 : n;
            const std::int64_t sy_count = ly == n ? 1 : n;
            double best = 0.0;
            for (std::int64_t sx = 0; sx < sx_count; ++sx)
                for (std::int64_t sy = 0; sy < sy_count; ++sy)
                    best = std::max(best, pw.mean(sx, sy, lx, ly) /
                                              mins[static_cast<std::size_t>(sx * n + sy)]);
            return best;
        });
    }
    if (std::isinf(p)) {
        const Cyclic2DPrefix plog(log_values_of(w.values), n);
        return sweep_rect_shapes(n, [&](std::int64_t lx, std::int64_t ly) {
            const std::int64_t sx_count = lx == n ? 1 : n;
            const std::int64_t sy_count = ly == n ? 1 : n;
            double best = 0.0;
            for (std::int64_t sx = 0; sx < sx_count; ++sx)
                for (std::int64_t sy = 0; sy < sy_count; ++sy)
                    best = std::max(best, pw.mean(sx, sy, lx, ly) *
                                              std::exp(-plog.mean(sx, sy, lx, ly)));
            return best;
        });
    }
    const Cyclic2DPrefix pinv(pow_values(w.values, -1.0 / (p - 1.0)), n);
    const double q = p - 1.0;
    return sweep_rect_shapes(n, [&](std::int64_t lx, std::int64_t ly) {
        const std::int64_t sx_count = lx == n ? 1 : n;
        const std::int64_t sy_count = ly == n ? 1 : n;
        double best = 0.0;
        for (std::int64_t sx = 0; sx < sx_count; ++sx)
            for (std::int64_t sy = 0; sy < sy_count; ++sy)
                best = std::max(best, pw.mean(sx, sy, lx, ly) *
                                          std::pow(pinv.mean(sx, sy, lx, ly), q));
        return best;
    });
}

double rhp_sup_part_2d(const Weight2D& w, double p, Scope scope) {
    if (!(p > 1.0)) throw std::invalid_argument("rhp_constant_2d: p must be > 1");
    const std::int64_t n = w.side();

    if (scope == Scope::Dyadic) {
        const DyadicTable2D sums(w.values, w.resolution, add2);
        if (std::isinf(p)) {
            const DyadicTable2D maxs(w.values, w.resolution, max2);
            return sweep_dyadic_2d(w.resolution, 0, [&](int kx, int ky, std::int64_t jx,
                                                        std::int64_t jy) {
                return maxs.entry(kx, ky, jx, jy) / sums.mean(w.resolution, kx, ky, jx, jy);
            });
        }
        const DyadicTable2D pows(pow_values(w.values, p), w.resolution, add2);
        return sweep_dyadic_2d(w.resolution, 0,
                               [&](int kx, int ky, std::int64_t jx, std::int64_t jy) {
                                   return std::pow(pows.mean(w.resolution, kx, ky, jx, jy),
                                                   1.0 / p) /
                                          sums.mean(w.resolution, kx, ky, jx, jy);
                               });
    }

    const Cyclic2DPrefix pw(w.values, n);
    if (std::isinf(p)) {
        return sweep_rect_shapes(n, [&](std::int64_t lx, std::int64_t ly) {
            std::vector<double> tmp, maxs;
            rect_extreme(w.values, n, lx, ly, tmp, maxs,
                         [](double a, double b) { return a > b; });
            const std::int64_t sx_count = lx == n ? 1 : n;
            const std::int64_t sy_count = ly == n ? 1 : n;
            double best = 0.0;
            for (std::int64_t sx = 0; sx < sx_count; ++sx)
                for (std::int64_t sy = 0; sy < sy_count; ++sy)
                    best = std::max(best, maxs[static_cast<std::size_t>(sx * n + sy)] /
                                              pw.mean(sx, sy, lx, ly));
            return best;
        });
    }
    const Cyclic2DPrefix ppow(pow_values(w.values, p), n);
    return sweep_rect_shapes(n, [&](std::int64_t lx, std::int64_t ly) {
        const std::int64_t sx_count = lx == n ? 1 : n;
        const std::int64_t sy_count = ly == n ? 1 : n;
        double best = 0.0;
        for (std::int64_t sx = 0; sx < sx_count; ++sx)
            for (std::int64_t sy = 0; sy < sy_count; ++sy)
                best = std::max(best, std::pow(ppow.mean(sx, sy, lx, ly), 1.0 / p) /
                                          pw.mean(sx, sy, lx, ly));
        return best;
    });
}

double rhp_constant_2d(const Weight2D& w, double p, Scope scope) {
    const double sup = rhp_sup_part_2d(w, p, scope);
    if (scope == Scope::GridArcs || w.resolution == 0) return sup;
    return std::max(sup, doubling_constant_2d(w, Scope::Dyadic));
}

double doubling_constant_2d(const Weight2D& w, Scope scope) {
    if (w.resolution < 1)
        throw std::invalid_argument("doubling_constant_2d: needs resolution >= 1");
    const std::int64_t n = w.side();

    if (scope == Scope::Dyadic) {
        const DyadicTable2D sums(w.values, w.resolution, add2);
        return sweep_dyadic_2d(w.resolution, 1,
                               [&](int kx, int ky, std::int64_t jx, std::int64_t jy) {
                                   return sums.entry(kx - 1, ky - 1, jx / 2, jy / 2) /
                                          sums.entry(kx, ky, jx, jy);
                               });
    }

    // Quarter-cell masses keep half-cell rectangle endpoints exact.
    const std::int64_t h = 2 * n;
    std::vector<double> quarter(static_cast<std::size_t>(h * h));
    for (std::int64_t i = 0; i < h; ++i)
        for (std::int64_t j = 0; j < h; ++j)
            quarter[static_cast<std::size_t>(i * h + j)] =
                0.25 * w.values[static_cast<std::size_t>((i / 2) * n + (j / 2))];
    const Cyclic2DPrefix pq(quarter, h);
    return sweep_rect_shapes(n / 2, [&](std::int64_t lx, std::int64_t ly) {
        double best = 0.0;
        for (std::int64_t sx = 0; sx < n; ++sx)
            for (std::int64_t sy = 0; sy < n; ++sy)
                best = std::max(best,
                                pq.sum(2 * sx - lx, 2 * sy - ly, 4 * lx, 4 * ly) /
                                    pq.sum(2 * sx, 2 * sy, 2 * lx, 2 * ly));
        return best;
    });
}

SliceConstants slice_constants(const Weight2D& w, double p, SliceAxis axis) {
    const std::int64_t n = w.side();
    SliceConstants out;
    out.per_slice.resize(static_cast<std::size_t>(n));
    parallel_for(0, n, [&](std::int64_t fixed) {
        std::vector<double> vals(static_cast<std::size_t>(n));
        for (std::int64_t k = 0; k < n; ++k)
            vals[static_cast<std::size_t>(k)] =
                axis == SliceAxis::X ? w.value(k, fixed) : w.value(fixed, k);
        const Weight slice = make_weight(w.resolution, std::move(vals));
        out.per_slice[static_cast<std::size_t>(fixed)] =
            ap_constant(slice, p, Scope::GridArcs);
    });
    out.max_constant = *std::max_element(out.per_slice.begin(), out.per_slice.end());
    return out;
}

namespace {

template <class MemberValue>
Weight2D averaged_2d(const WeightFamily2D& fam, MemberValue member_value, bool geometric) {
    const std::int64_t n = fam.members[0].side();
    std::int64_t active = 0;
    std::vector<long double> acc(static_cast<std::size_t>(n * n), 0.0L);
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = 0; j < n; ++j) {
            if (!fam.mask[static_cast<std::size_t>(i * n + j)]) continue;
            ++active;
            const Weight2D& m = fam.members[static_cast<std::size_t>(i * n + j)];
            for (std::int64_t cx = 0; cx < n; ++cx) {
                const std::int64_t mx = mod_cells(cx + i, n);
                for (std::int64_t cy = 0; cy < n; ++cy)
                    acc[static_cast<std::size_t>(cx * n + cy)] +=
                        member_value(m, mx, mod_cells(cy + j, n));
            }
        }
    }
    std::vector<double> vals(static_cast<std::size_t>(n * n));
    for (std::size_t c = 0; c < vals.size(); ++c) {
        const double mean = static_cast<double>(acc[c] / active);
        vals[c] = geometric ? std::exp(mean) : mean;
    }
    return make_weight_2d(fam.resolution, std::move(vals));
}

}  // namespace

Weight2D ga_average_2d(const WeightFamily2D& fam) {
    return averaged_2d(
        fam,
        [](const Weight2D& m, std::int64_t x, std::int64_t y) {
            return std::log(m.value(x, y));
        },
        true);
}

Weight2D translation_average_2d(const WeightFamily2D& fam) {
    return averaged_2d(
        fam,
        [](const Weight2D& m, std::int64_t x, std::int64_t y) { return m.value(x, y); },
        false);
}

}  // namespace mlab
