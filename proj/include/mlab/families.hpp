#pragma once

#include <cstdint>
#include <vector>

#include "mlab/averaging.hpp"
#include "mlab/grid.hpp"
#include "mlab/product.hpp"

namespace mlab {

// splitmix64: the single documented RNG behind every generator, so that a
// (spec, seed) pair regenerates bit-identical data anywhere.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::uint64_t state_;
};

// Independent stream seed for the index-th sub-generator of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Random dyadic martingale cascade: root mean 1, each node splitting into
// children scaled by (1+d), (1-d) with d drawn uniformly from [-delta, delta],
// level by level. Dyadic doubling constant <= 2(1+delta)/(1-delta).
struct CascadeSpec {
    int resolution = 0;
    double delta = 0.0;
    std::uint64_t seed = 0;
};

Weight cascade_weight(const CascadeSpec& spec);

// Fixed-multiplier Bernoulli cascade: cell value = prod over binary digits of
// (1+a) for 1-bits and (1-a) for 0-bits. Dyadically doubling with constant
// exactly 2/(1-a), but doubling fails across the midpoint seam.
Weight seam_weight(int resolution, double a);

// Member i = w translated by i cells, so the shifted slices reassemble w.
WeightFamily translate_family(const Weight& w);

// Trigonometric polynomial g(x) = sum_m a_m cos(2 pi m x) + b_m sin(2 pi m x).
struct TrigPoly {
    std::vector<double> cos_coeffs;  // a_1, a_2, ...
    std::vector<double> sin_coeffs;  // b_1, b_2, ...

    double eval(double x) const;
    double coeff_l1() const;         // upper bound for sup |g|
    double lipschitz_bound() const;  // sum 2 pi m (|a_m| + |b_m|)
};

// w = exp(g) sampled at cell midpoints; rejects g with sampled sup > 4.
Weight smooth_doubling_weight(int resolution, const TrigPoly& g);

// A priori doubling bound 2 exp(min(lip/2, 2 l1)) from the smoothness of g.
double smooth_doubling_bound(const TrigPoly& g);

// The two borderline model weights, centered at the circle point 1/2 with
// cell values by exact integration of the model in the distance coordinate:
//   A1Boundary    : w(d) = 1 / log(1/d)    (vanishes toward the center)
//   RHInfBoundary : w(d) = max(log(1/d), 1)
enum class BoundaryKind { A1Boundary, RHInfBoundary };

Weight boundary_log_weight(int resolution, BoundaryKind kind);

// Family of independently seeded cascades, one per entry (all same N).
WeightFamily random_family(const std::vector<CascadeSpec>& specs);

// Convenience: 2^N cascades with per-member seeds derived from `seed`.
WeightFamily cascade_family(int resolution, double delta, std::uint64_t seed);

// Family of smooth doubling weights. Coefficient draws are shared in groups
// of 2^(N-8) consecutive shifts for N > 8, so the same seed yields nested
// families across resolutions.
WeightFamily smooth_family(int resolution, std::uint64_t seed, int harmonics = 3,
                           double amplitude = 0.5);

// Quadtree cascade on the bidisc: each square splits into four children
// scaled by (1 +- dx)(1 +- dy), dx, dy drawn from [-delta, delta].
Weight2D cascade_weight_2d(const CascadeSpec& spec);

WeightFamily2D cascade_family_2d(int resolution, double delta, std::uint64_t seed);

// Separable smooth members exp(g1(x)) exp(g2(y)); product doubling weights.
WeightFamily2D smooth_family_2d(int resolution, std::uint64_t seed, int harmonics = 2,
                                double amplitude = 0.4);

}  // namespace mlab
