#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mlab/grid.hpp"

namespace mlab {

// A family {w^t} indexed by the grid shifts t = i * 2^-N, one member per
// shift, with a subset mask selecting which shifts enter the averages. The
// shift grid equals the space grid, so x + t never needs interpolation.
struct WeightFamily {
    int resolution = 0;
    std::vector<Weight> members;      // exactly 2^N, member i belongs to shift i
    std::vector<std::uint8_t> mask;   // same length, at least one bit set
};

// Validates member count/resolutions and the mask; empty mask argument means
// all shifts selected.
WeightFamily make_family(std::vector<Weight> members, std::vector<std::uint8_t> mask = {});

std::int64_t mask_count(const WeightFamily& fam);

// Per-member circle means of log w^t, and the constant factor
// exp(avg over masked t of those means) that normalization removes.
struct NormalizationRecord {
    std::vector<double> log_means;
    double grand_factor = 1.0;
};

// Scales each member so its log has mean zero. Averages of the normalized
// family times grand_factor reproduce averages of the original.
std::pair<WeightFamily, NormalizationRecord> normalize_logmean(const WeightFamily& fam);
WeightFamily denormalize(const WeightFamily& fam, const NormalizationRecord& record);

// Omega(x) = exp( avg over masked i of log w^{t_i}(x + t_i) ), computed in
// log space and exponentiated once per cell.
Weight ga_average(const WeightFamily& fam);

// The arithmetic analogue: avg over masked i of w^{t_i}(x + t_i).
Weight translation_average(const WeightFamily& fam);

// Cellwise w1 * w2^{1-p}; multiplying two A_1 weights this way lands in A_p.
Weight ap_factor_product(const Weight& w1, const Weight& w2, double p);

// Coarser family: every 2^levels-th shift, members coarsened to match.
WeightFamily coarsen(const WeightFamily& fam, int levels);

// Member logs as grid functions (used for the oscillation estimates).
std::vector<GridFn> member_logs(const WeightFamily& fam);

}  // namespace mlab
