#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mlab/grid.hpp"

namespace mlab {

// Haar expansion of a grid function: the circle mean plus one coefficient
// (f, h_I) per dyadic interval I with |I| > 2^-N, stored level by level.
// h_I is +|I|^-1/2 on the left half of I and -|I|^-1/2 on the right half.
struct HaarCoeffs {
    int resolution = 0;
    double mean = 0.0;
    std::vector<std::vector<double>> levels;  // levels[k][j], k in [0, N), j in [0, 2^k)

    double coeff(const DyadicInterval& I) const {
        return levels[static_cast<std::size_t>(I.level)][static_cast<std::size_t>(I.index)];
    }
};

HaarCoeffs haar_analyze(const GridFn& f);
GridFn haar_reconstruct(const HaarCoeffs& c);

// Conditional mean onto the level-k dyadic partition, i.e. the Haar partial
// sum of the mean plus all coefficients of level < k.
GridFn conditional_mean(const GridFn& f, int level);

// f split at the scale cutoff_cells * 2^-N: small_scales collects the Haar
// terms with |J| strictly below the cutoff, large_scales carries the mean and
// every term at or above it. small_scales + large_scales == f.
struct ScaleSplit {
    GridFn small_scales;
    GridFn large_scales;
};
ScaleSplit scale_split(const GridFn& f, std::int64_t cutoff_cells);

// Smallest C with sum_{J subset I} (f,h_J)^2 <= C|I| over dyadic I, for
// mean-zero f. With sweep_grid_arcs the sup also runs over grid-aligned
// arcs (the packing sum is still over dyadic J inside the arc).
double carleson_constant(const GridFn& f, bool sweep_grid_arcs = false);

// For a family of mean-zero functions phi^t and an arc Q: the split of the
// translation-average phi at the scale of |Q| gives
//   ca = avg over Q of phi_A^2,
//   cb = sup_{x0 in Q} avg over Q of |phi_B(x) - phi_B(x0)|.
struct CaCb {
    double ca = 0.0;
    double cb = 0.0;
};
CaCb empirical_ca_cb(std::span<const GridFn> phis, std::span<const std::uint8_t> mask, Arc q);

// Sup of the per-arc values over every grid arc.
CaCb ca_cb_envelope(std::span<const GridFn> phis, std::span<const std::uint8_t> mask);

}  // namespace mlab
