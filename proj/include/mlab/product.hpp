#pragma once

#include <cstdint>
#include <vector>

#include "mlab/constants.hpp"
#include "mlab/grid.hpp"

namespace mlab {

// Strictly positive function on the 2^N x 2^N grid of the bidisc boundary,
// row-major with the first coordinate outermost: value(ix, iy).
struct Weight2D {
    int resolution = 0;
    std::vector<double> values;

    std::int64_t side() const { return std::int64_t{1} << resolution; }
    double value(std::int64_t ix, std::int64_t iy) const {
        return values[static_cast<std::size_t>(ix * side() + iy)];
    }
};

Weight2D make_weight_2d(int resolution, std::vector<double> values);
Weight2D tensor_weight(const Weight& u, const Weight& v);

// Family {w^{s,t}} indexed by shift pairs (i, j) on the same grid; member
// (i, j) sits at index i * 2^N + j.
struct WeightFamily2D {
    int resolution = 0;
    std::vector<Weight2D> members;
    std::vector<std::uint8_t> mask;
};

WeightFamily2D make_family_2d(std::vector<Weight2D> members,
                              std::vector<std::uint8_t> mask = {});

// Exact mean over the product rectangle qx x qy via 2D cyclic prefix sums.
double rect_average(const Weight2D& w, Arc qx, Arc qy);

// Rectangle analogues of the one-variable constants; sweeps run over pairs
// of grid arcs or pairs of dyadic intervals.
double ap_constant_2d(const Weight2D& w, double p, Scope scope);
double rhp_sup_part_2d(const Weight2D& w, double p, Scope scope);
double rhp_constant_2d(const Weight2D& w, double p, Scope scope);
// Doubling with both sides doubled; GridArcs restricts both lengths to half
// the circle, Dyadic uses the dyadic parent in each axis.
double doubling_constant_2d(const Weight2D& w, Scope scope);

enum class SliceAxis { X, Y };  // X: slices x -> w(x, y) for each fixed y

struct SliceConstants {
    double max_constant = 0.0;
    std::vector<double> per_slice;
};

// Grid-arc A_p constant of every one-variable slice along the axis.
SliceConstants slice_constants(const Weight2D& w, double p, SliceAxis axis);

// Omega(x,y) = exp of the mask-normalized average of
// log w^{s,t}(x+s, y+t); translation_average_2d is the arithmetic analogue.
Weight2D ga_average_2d(const WeightFamily2D& fam);
Weight2D translation_average_2d(const WeightFamily2D& fam);

}  // namespace mlab
