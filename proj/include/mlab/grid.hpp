#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace mlab {

// Real-valued function on the dyadic grid of the circle [0,1): 2^resolution
// cells of width 2^-resolution, cell i covering [i*2^-N, (i+1)*2^-N).
struct GridFn {
    int resolution = 0;
    std::vector<double> values;

    std::int64_t cells() const { return static_cast<std::int64_t>(values.size()); }
    double cell_width() const { return std::ldexp(1.0, -resolution); }
};

// Strictly positive grid function. Build through make_weight so that the
// positivity / length / finiteness invariants always hold.
struct Weight {
    int resolution = 0;
    std::vector<double> values;

    std::int64_t cells() const { return static_cast<std::int64_t>(values.size()); }
    double cell_width() const { return std::ldexp(1.0, -resolution); }
};

// Validates: values.size() == 2^resolution, every value finite and > 0.
// Throws std::invalid_argument naming the offending index otherwise.
Weight make_weight(int resolution, std::vector<double> values);

GridFn to_grid(const Weight& w);
GridFn log_values(const Weight& w);
Weight exp_weight(const GridFn& f);  // cellwise exp, validated
Weight scale_weight(const Weight& w, double factor);

// Circular run of cells: start in [0, 2^N), 1 <= length <= 2^N, wraps mod 2^N.
struct Arc {
    std::int64_t start = 0;
    std::int64_t length = 1;
};

// [j*2^-k, (j+1)*2^-k). Level k >= 0, index j in [0, 2^k). Never wraps.
struct DyadicInterval {
    int level = 0;
    std::int64_t index = 0;

    double measure() const { return std::ldexp(1.0, -level); }
    Arc as_arc(int resolution) const;
};

std::int64_t mod_cells(std::int64_t x, std::int64_t n);

// Cyclic prefix sums over the cell values; wrapped range sums in O(1).
// Accumulation is in extended precision so that range differences stay
// accurate even when the range mass is a small fraction of the total.
class CyclicPrefix {
public:
    CyclicPrefix() = default;
    explicit CyclicPrefix(std::span<const double> cell_values);

    std::int64_t size() const { return n_; }
    // Sum of cells start..start+length-1 (start taken mod n, length <= n).
    double sum(std::int64_t start, std::int64_t length) const;
    double mean(std::int64_t start, std::int64_t length) const;

private:
    std::int64_t n_ = 0;
    std::vector<long double> pre_;  // pre_[i] = sum of the first i doubled cells
};

double arc_average(const Weight& w, Arc q);
double arc_average(const GridFn& f, Arc q);

// Cyclic shift by shift_cells: result[x] = f[(x - shift) mod n], the grid
// version of the translation f(. - t).
Weight translate(const Weight& w, std::int64_t shift_cells);
GridFn translate(const GridFn& f, std::int64_t shift_cells);

// All grid arcs of length 1..max_length_cells, each exactly once; the
// full-circle arc is canonicalized to start 0.
std::vector<Arc> enumerate_arcs(int resolution, std::int64_t max_length_cells);

// All 2^(N+1)-1 dyadic intervals of level 0..N.
std::vector<DyadicInterval> dyadic_intervals(int resolution);

// out[c] = average over masked i of members[i][(c + i) mod n]; the grid form
// of the translation-average of a family of shifted functions.
GridFn shifted_average(std::span<const GridFn> members, std::span<const std::uint8_t> mask);

// Adjacent-cell means: resolution drops by `levels`, integrals preserved.
Weight coarsen(const Weight& w, int levels);
GridFn coarsen(const GridFn& f, int levels);

// Per-start extrema of circular windows of the given length.
std::vector<double> cyclic_window_min(std::span<const double> v, std::int64_t window);
std::vector<double> cyclic_window_max(std::span<const double> v, std::int64_t window);

// pyramid[k][j] aggregates cells of the dyadic interval (k, j); k = 0..N.
std::vector<std::vector<double>> dyadic_sum_pyramid(std::span<const double> v);
std::vector<std::vector<double>> dyadic_min_pyramid(std::span<const double> v);
std::vector<std::vector<double>> dyadic_max_pyramid(std::span<const double> v);

}  // namespace mlab
