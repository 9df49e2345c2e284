#include "mlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mlab {

namespace {

std::int64_t checked_cell_count(int resolution) {
    if (resolution < 0 || resolution > 30)
        throw std::invalid_argument("resolution must be in [0, 30], got " +
                                    std::to_string(resolution));
    return std::int64_t{1} << resolution;
}

}  // namespace

std::int64_t mod_cells(std::int64_t x, std::int64_t n) {
    std::int64_t r = x % n;
    return r < 0 ? r + n : r;
}

Weight make_weight(int resolution, std::vector<double> values) {
    const std::int64_t n = checked_cell_count(resolution);
    if (static_cast<std::int64_t>(values.size()) != n)
        throw std::invalid_argument("weight: expected " + std::to_string(n) +
                                    " values at resolution " + std::to_string(resolution) +
                                    ", got " + std::to_string(values.size()));
    for (std::int64_t i = 0; i < n; ++i) {
        const double v = values[static_cast<std::size_t>(i)];
        if (!std::isfinite(v))
            throw std::invalid_argument("weight: value at index " + std::to_string(i) +
                                        " is not finite");
        if (v <= 0.0)
            throw std::invalid_argument("weight: value at index " + std::to_string(i) +
                                        " is not positive (" + std::to_string(v) + ")");
    }
    return Weight{resolution, std::move(values)};
}

GridFn to_grid(const Weight& w) { return GridFn{w.resolution, w.values}; }

GridFn log_values(const Weight& w) {
    GridFn f{w.resolution, std::vector<double>(w.values.size())};
    for (std::size_t i = 0; i < w.values.size(); ++i) f.values[i] = std::log(w.values[i]);
    return f;
}

Weight exp_weight(const GridFn& f) {
    std::vector<double> vals(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) vals[i] = std::exp(f.values[i]);
    return make_weight(f.resolution, std::move(vals));
}

Weight scale_weight(const Weight& w, double factor) {
    std::vector<double> vals(w.values.size());
    for (std::size_t i = 0; i < w.values.size(); ++i) vals[i] = factor * w.values[i];
    return make_weight(w.resolution, std::move(vals));
}

Arc DyadicInterval::as_arc(int resolution) const {
    const std::int64_t step = std::int64_t{1} << (resolution - level);
    return Arc{index * step, step};
}

CyclicPrefix::CyclicPrefix(std::span<const double> cell_values) {
    n_ = static_cast<std::int64_t>(cell_values.size());
    pre_.assign(static_cast<std::size_t>(2 * n_ + 1), 0.0L);
    long double acc = 0.0L;
    for (std::int64_t i = 0; i < 2 * n_; ++i) {
        acc += cell_values[static_cast<std::size_t>(i % n_)];
        pre_[static_cast<std::size_t>(i + 1)] = acc;
    }
}

double CyclicPrefix::sum(std::int64_t start, std::int64_t length) const {
    const std::int64_t s = mod_cells(start, n_);
    return static_cast<double>(pre_[static_cast<std::size_t>(s + length)] -
                               pre_[static_cast<std::size_t>(s)]);
}

double CyclicPrefix::mean(std::int64_t start, std::int64_t length) const {
    const std::int64_t s = mod_cells(start, n_);
    return static_cast<double>((pre_[static_cast<std::size_t>(s + length)] -
                                pre_[static_cast<std::size_t>(s)]) /
                               static_cast<long double>(length));
}

namespace {

void check_arc(std::int64_t n, Arc q) {
    if (q.length < 1 || q.length > n)
        throw std::invalid_argument("arc length " + std::to_string(q.length) +
                                    " out of range [1, " + std::to_string(n) + "]");
    if (q.start < 0 || q.start >= n)
        throw std::invalid_argument("arc start " + std::to_string(q.start) +
                                    " out of range [0, " + std::to_string(n) + ")");
}

double arc_average_impl(std::span<const double> v, Arc q) {
    const std::int64_t n = static_cast<std::int64_t>(v.size());
    check_arc(n, q);
    // A one-off query; direct compensated summation in arc order.
    long double acc = 0.0L;
    for (std::int64_t k = 0; k < q.length; ++k)
        acc += v[static_cast<std::size_t>(mod_cells(q.start + k, n))];
    return static_cast<double>(acc / static_cast<long double>(q.length));
}

}  // namespace

double arc_average(const Weight& w, Arc q) { return arc_average_impl(w.values, q); }
double arc_average(const GridFn& f, Arc q) { return arc_average_impl(f.values, q); }

namespace {

std::vector<double> translate_impl(std::span<const double> v, std::int64_t shift) {
    const std::int64_t n = static_cast<std::int64_t>(v.size());
    std::vector<double> out(v.size());
    for (std::int64_t x = 0; x < n; ++x)
        out[static_cast<std::size_t>(x)] = v[static_cast<std::size_t>(mod_cells(x - shift, n))];
    return out;
}

}  // namespace

Weight translate(const Weight& w, std::int64_t shift_cells) {
    return Weight{w.resolution, translate_impl(w.values, shift_cells)};
}

GridFn translate(const GridFn& f, std::int64_t shift_cells) {
    return GridFn{f.resolution, translate_impl(f.values, shift_cells)};
}

std::vector<Arc> enumerate_arcs(int resolution, std::int64_t max_length_cells) {
    const std::int64_t n = checked_cell_count(resolution);
    if (max_length_cells < 1 || max_length_cells > n)
        throw std::invalid_argument("max_length_cells out of range");
    std::vector<Arc> arcs;
    for (std::int64_t len = 1; len <= max_length_cells; ++len) {
        if (len == n) {
            arcs.push_back(Arc{0, n});  // every start describes the same set
            continue;
        }
        for (std::int64_t s = 0; s < n; ++s) arcs.push_back(Arc{s, len});
    }
    return arcs;
}

std::vector<DyadicInterval> dyadic_intervals(int resolution) {
    checked_cell_count(resolution);
    std::vector<DyadicInterval> out;
    out.reserve(static_cast<std::size_t>((std::int64_t{1} << (resolution + 1)) - 1));
    for (int k = 0; k <= resolution; ++k)
        for (std::int64_t j = 0; j < (std::int64_t{1} << k); ++j)
            out.push_back(DyadicInterval{k, j});
    return out;
}

GridFn shifted_average(std::span<const GridFn> members, std::span<const std::uint8_t> mask) {
    if (members.empty()) throw std::invalid_argument("shifted_average: empty family");
    const std::int64_t n = members[0].cells();
    if (static_cast<std::int64_t>(members.size()) != n)
        throw std::invalid_argument("shifted_average: member count must equal cell count");
    if (!mask.empty() && mask.size() != members.size())
        throw std::invalid_argument("shifted_average: mask length mismatch");
    std::int64_t active = 0;
    std::vector<long double> acc(static_cast<std::size_t>(n), 0.0L);
    for (std::int64_t i = 0; i < n; ++i) {
        if (!mask.empty() && !mask[static_cast<std::size_t>(i)]) continue;
        ++active;
        const auto& v = members[static_cast<std::size_t>(i)].values;
        if (static_cast<std::int64_t>(v.size()) != n)
            throw std::invalid_argument("shifted_average: member resolution mismatch");
        for (std::int64_t c = 0; c < n; ++c)
            acc[static_cast<std::size_t>(c)] += v[static_cast<std::size_t>(mod_cells(c + i, n))];
    }
    if (active == 0) throw std::invalid_argument("shifted_average: empty mask");
    GridFn out{members[0].resolution, std::vector<double>(static_cast<std::size_t>(n))};
    for (std::int64_t c = 0; c < n; ++c)
        out.values[static_cast<std::size_t>(c)] =
            static_cast<double>(acc[static_cast<std::size_t>(c)] / active);
    return out;
}

namespace {

std::vector<double> coarsen_impl(std::span<const double> v, int resolution, int levels) {
    if (levels < 0 || levels > resolution)
        throw std::invalid_argument("coarsen: levels out of range");
    const std::int64_t block = std::int64_t{1} << levels;
    const std::int64_t m = static_cast<std::int64_t>(v.size()) / block;
    std::vector<double> out(static_cast<std::size_t>(m));
    for (std::int64_t j = 0; j < m; ++j) {
        long double acc = 0.0L;
        for (std::int64_t k = 0; k < block; ++k)
            acc += v[static_cast<std::size_t>(j * block + k)];
        out[static_cast<std::size_t>(j)] = static_cast<double>(acc / block);
    }
    return out;
}

}  // namespace

Weight coarsen(const Weight& w, int levels) {
    return Weight{w.resolution - levels, coarsen_impl(w.values, w.resolution, levels)};
}

GridFn coarsen(const GridFn& f, int levels) {
    return GridFn{f.resolution - levels, coarsen_impl(f.values, f.resolution, levels)};
}

namespace {

template <class Better>
std::vector<double> cyclic_window_extreme(std::span<const double> v, std::int64_t window,
                                          Better better) {
    const std::int64_t n = static_cast<std::int64_t>(v.size());
    if (window < 1 || window > n) throw std::invalid_argument("window out of range");
    std::vector<double> out(static_cast<std::size_t>(n));
    // monotonic queue over the doubled array, stored in a flat ring
    std::vector<std::int64_t> ring(static_cast<std::size_t>(n + window));
    std::int64_t head = 0, tail = 0;  // [head, tail)
    for (std::int64_t j = 0; j < n + window - 1; ++j) {
        const double val = v[static_cast<std::size_t>(j % n)];
        while (tail > head &&
               !better(v[static_cast<std::size_t>(ring[static_cast<std::size_t>(tail - 1)] % n)],
                       val))
            --tail;
        ring[static_cast<std::size_t>(tail++)] = j;
        if (ring[static_cast<std::size_t>(head)] <= j - window) ++head;
        if (j >= window - 1) {
            const std::int64_t s = j - window + 1;
            if (s < n)
                out[static_cast<std::size_t>(s)] =
                    v[static_cast<std::size_t>(ring[static_cast<std::size_t>(head)] % n)];
        }
    }
    return out;
}

}  // namespace

std::vector<double> cyclic_window_min(std::span<const double> v, std::int64_t window) {
    return cyclic_window_extreme(v, window, [](double a, double b) { return a < b; });
}

std::vector<double> cyclic_window_max(std::span<const double> v, std::int64_t window) {
    return cyclic_window_extreme(v, window, [](double a, double b) { return a > b; });
}

namespace {

template <class Combine>
std::vector<std::vector<double>> pyramid(std::span<const double> v, Combine combine) {
    std::int64_t n = static_cast<std::int64_t>(v.size());
    int levels = 0;
    while ((std::int64_t{1} << levels) < n) ++levels;
    std::vector<std::vector<double>> out(static_cast<std::size_t>(levels + 1));
    out[static_cast<std::size_t>(levels)].assign(v.begin(), v.end());
    for (int k = levels - 1; k >= 0; --k) {
        const auto& fine = out[static_cast<std::size_t>(k + 1)];
        auto& row = out[static_cast<std::size_t>(k)];
        row.resize(fine.size() / 2);
        for (std::size_t j = 0; j < row.size(); ++j)
            row[j] = combine(fine[2 * j], fine[2 * j + 1]);
    }
    return out;
}

}  // namespace

std::vector<std::vector<double>> dyadic_sum_pyramid(std::span<const double> v) {
    return pyramid(v, [](double a, double b) { return a + b; });
}

std::vector<std::vector<double>> dyadic_min_pyramid(std::span<const double> v) {
    return pyramid(v, [](double a, double b) { return std::min(a, b); });
}

std::vector<std::vector<double>> dyadic_max_pyramid(std::span<const double> v) {
    return pyramid(v, [](double a, double b) { return std::max(a, b); });
}

}  // namespace mlab
