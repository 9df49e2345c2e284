#pragma once

#include <limits>
#include <span>

#include "mlab/grid.hpp"

namespace mlab {

// Which family of intervals a supremum runs over. GridArcs sweeps every
// grid-aligned arc (wrap-around included); Dyadic sweeps the dyadic
// intervals only. Dyadic suprema never exceed their GridArcs counterparts.
enum class Scope { GridArcs, Dyadic };

inline constexpr double infinite_p = std::numeric_limits<double>::infinity();

// sup over the scope of the A_p functional of the arc Q:
//   1 < p < inf : (avg w) (avg w^{-1/(p-1)})^{p-1}
//   p = 1       : (avg w) / (min over Q)
//   p = inf     : (avg w) exp(-avg log w)
double ap_constant(const Weight& w, double p, Scope scope);

// sup over the scope of (avg w^p)^{1/p} / (avg w), p = inf using max / avg.
double rhp_sup_part(const Weight& w, double p, Scope scope);

// The reverse-Holder constant. On GridArcs this is the sup part; on Dyadic
// it is the larger of the dyadic sup part and the dyadic doubling constant.
double rhp_constant(const Weight& w, double p, Scope scope);

// sup of mass(doubled Q) / mass(Q). GridArcs: arcs of length <= half the
// circle, doubled about the midpoint (half-cell endpoints handled exactly).
// Dyadic: the dyadic parent, levels >= 1.
double doubling_constant(const Weight& w, Scope scope);

// sup over the scope of (avg |f - f_Q|^q)^{1/q}, q in {1, 2}.
double bmo_norm(const GridFn& f, Scope scope, int exponent = 1);

// Hardy-Littlewood maximal function: per cell, the sup of avg |f| over every
// grid arc containing that cell.
GridFn hl_maximal(const GridFn& f);

// max over the test functions of integral(|Mf|^p w) / integral(|f|^p w);
// a lower bound for the best constant in the maximal-operator inequality.
double maximal_norm_ratio(const Weight& w, double p, std::span<const GridFn> test_functions);

}  // namespace mlab
