#include "mlab/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mlab {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
    return g.next();
}

Weight cascade_weight(const CascadeSpec& spec) {
    if (!(spec.delta >= 0.0 && spec.delta < 1.0))
        throw std::invalid_argument("cascade: delta must be in [0, 1)");
    SplitMix64 rng(spec.seed);
    std::vector<double> cur{1.0};
    for (int k = 0; k < spec.resolution; ++k) {
        std::vector<double> next(cur.size() * 2);
        for (std::size_t j = 0; j < cur.size(); ++j) {
            const double d = rng.uniform(-spec.delta, spec.delta);
            next[2 * j] = cur[j] * (1.0 + d);
            next[2 * j + 1] = cur[j] * (1.0 - d);
        }
        cur = std::move(next);
    }
    return make_weight(spec.resolution, std::move(cur));
}

Weight seam_weight(int resolution, double a) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("seam: a must be in (0, 1)");
    std::vector<double> cur{1.0};
    for (int k = 0; k < resolution; ++k) {
        std::vector<double> next(cur.size() * 2);
        for (std::size_t j = 0; j < cur.size(); ++j) {
            next[2 * j] = cur[j] * (1.0 - a);      // 0-bit half
            next[2 * j + 1] = cur[j] * (1.0 + a);  // 1-bit half
        }
        cur = std::move(next);
    }
    return make_weight(resolution, std::move(cur));
}

WeightFamily translate_family(const Weight& w) {
    const std::int64_t n = w.cells();
    std::vector<Weight> members;
    members.reserve(static_cast<std::size_t>(n));
    // member i(x) = w(x - t_i), so member i evaluated at x + t_i gives w(x)
    for (std::int64_t i = 0; i < n; ++i) members.push_back(translate(w, i));
    return make_family(std::move(members));
}

double TrigPoly::eval(double x) const {
    double g = 0.0;
    for (std::size_t m = 0; m < cos_coeffs.size(); ++m)
        g += cos_coeffs[m] * std::cos(2.0 * std::numbers::pi * double(m + 1) * x);
    for (std::size_t m = 0; m < sin_coeffs.size(); ++m)
        g += sin_coeffs[m] * std::sin(2.0 * std::numbers::pi * double(m + 1) * x);
    return g;
}

double TrigPoly::coeff_l1() const {
    double s = 0.0;
    for (double a : cos_coeffs) s += std::fabs(a);
    for (double b : sin_coeffs) s += std::fabs(b);
    return s;
}

double TrigPoly::lipschitz_bound() const {
    double s = 0.0;
    for (std::size_t m = 0; m < cos_coeffs.size(); ++m)
        s += 2.0 * std::numbers::pi * double(m + 1) * std::fabs(cos_coeffs[m]);
    for (std::size_t m = 0; m < sin_coeffs.size(); ++m)
        s += 2.0 * std::numbers::pi * double(m + 1) * std::fabs(sin_coeffs[m]);
    return s;
}

Weight smooth_doubling_weight(int resolution, const TrigPoly& g) {
    const int probes = 1 << 14;
    double sup = 0.0;
    for (int i = 0; i < probes; ++i)
        sup = std::max(sup, std::fabs(g.eval((i + 0.5) / probes)));
    if (sup > 4.0)
        throw std::invalid_argument("smooth weight: sup |g| = " + std::to_string(sup) +
                                    " exceeds the cap 4");
    const std::int64_t n = std::int64_t{1} << resolution;
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        vals[static_cast<std::size_t>(i)] =
            std::exp(g.eval((static_cast<double>(i) + 0.5) / static_cast<double>(n)));
    return make_weight(resolution, std::move(vals));
}

double smooth_doubling_bound(const TrigPoly& g) {
    // osc of g over the doubled arc is at most min(lip/2, 2 l1) on the circle
    return 2.0 * std::exp(std::min(0.5 * g.lipschitz_bound(), 2.0 * g.coeff_l1()));
}

namespace {

// -li(x) for x in [0, 1): the exact antiderivative of 1/log(1/t) on (0, 1),
// via Ei(y) = gamma + log|y| + sum y^k / (k k!) at y = log x < 0.
double neg_li(double x) {
    if (x == 0.0) return 0.0;
    const double y = std::log(x);
    constexpr double euler_gamma = 0.57721566490153286060651209008240243;
    double term = 1.0;  // y^k / k!
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= y / k;
        const double add = term / k;
        sum += add;
        if (std::fabs(add) < 1e-18 * (1.0 + std::fabs(sum)) && k > std::fabs(y)) break;
    }
    return -(euler_gamma + std::log(-y) + sum);
}

// Antiderivative of max(log(1/t), 1), zero at zero.
double floor_log_antideriv(double u) {
    constexpr double inv_e = 0.36787944117144232159552377016146087;
    if (u <= 0.0) return 0.0;
    if (u <= inv_e) return u * (1.0 - std::log(u));
    return u + inv_e;
}

}  // namespace

Weight boundary_log_weight(int resolution, BoundaryKind kind) {
    if (resolution < 4)
        throw std::invalid_argument("boundary weight: needs resolution >= 4");
    const std::int64_t n = std::int64_t{1} << resolution;
    const double h = std::ldexp(1.0, -resolution);
    const auto antideriv = kind == BoundaryKind::A1Boundary ? neg_li : floor_log_antideriv;
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        // d = distance to the center point 1/2; cells never straddle it
        const double a = static_cast<double>(i) * h;
        const double b = a + h;
        double d0, d1;
        if (b <= 0.5) {
            d0 = 0.5 - b;
            d1 = 0.5 - a;
        } else {
            d0 = a - 0.5;
            d1 = b - 0.5;
        }
        vals[static_cast<std::size_t>(i)] = (antideriv(d1) - antideriv(d0)) / h;
    }
    return make_weight(resolution, std::move(vals));
}

WeightFamily random_family(const std::vector<CascadeSpec>& specs) {
    if (specs.empty()) throw std::invalid_argument("random_family: no specs");
    const int resolution = specs[0].resolution;
    for (std::size_t i = 0; i < specs.size(); ++i)
        if (specs[i].resolution != resolution)
            throw std::invalid_argument("random_family: spec " + std::to_string(i) +
                                        " has mismatched resolution");
    std::vector<Weight> members;
    members.reserve(specs.size());
    for (const auto& s : specs) members.push_back(cascade_weight(s));
    return make_family(std::move(members));
}

WeightFamily cascade_family(int resolution, double delta, std::uint64_t seed) {
    const std::int64_t n = std::int64_t{1} << resolution;
    std::vector<CascadeSpec> specs;
    specs.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        specs.push_back(CascadeSpec{resolution, delta, derive_seed(seed, static_cast<std::uint64_t>(i))});
    return random_family(specs);
}

namespace {

TrigPoly draw_trig(SplitMix64& rng, int harmonics, double amplitude) {
    TrigPoly g;
    g.cos_coeffs.resize(static_cast<std::size_t>(harmonics));
    g.sin_coeffs.resize(static_cast<std::size_t>(harmonics));
    for (int m = 0; m < harmonics; ++m) {
        const double cap = amplitude / double(m + 1);
        g.cos_coeffs[static_cast<std::size_t>(m)] = rng.uniform(-cap, cap);
        g.sin_coeffs[static_cast<std::size_t>(m)] = rng.uniform(-cap, cap);
    }
    return g;
}

}  // namespace

WeightFamily smooth_family(int resolution, std::uint64_t seed, int harmonics,
                           double amplitude) {
    const std::int64_t n = std::int64_t{1} << resolution;
    const int group_shift = resolution > 8 ? resolution - 8 : 0;
    std::vector<Weight> members;
    members.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(i >> group_shift)));
        members.push_back(smooth_doubling_weight(resolution, draw_trig(rng, harmonics, amplitude)));
    }
    return make_family(std::move(members));
}

Weight2D cascade_weight_2d(const CascadeSpec& spec) {
    if (!(spec.delta >= 0.0 && spec.delta < 1.0))
        throw std::invalid_argument("cascade2d: delta must be in [0, 1)");
    SplitMix64 rng(spec.seed);
    std::vector<double> cur{1.0};
    std::int64_t side = 1;
    for (int k = 0; k < spec.resolution; ++k) {
        const std::int64_t next_side = side * 2;
        std::vector<double> next(static_cast<std::size_t>(next_side * next_side));
        for (std::int64_t i = 0; i < side; ++i) {
            for (std::int64_t j = 0; j < side; ++j) {
                const double dx = rng.uniform(-spec.delta, spec.delta);
                const double dy = rng.uniform(-spec.delta, spec.delta);
                const double base = cur[static_cast<std::size_t>(i * side + j)];
                for (int cx = 0; cx < 2; ++cx)
                    for (int cy = 0; cy < 2; ++cy)
                        next[static_cast<std::size_t>((2 * i + cx) * next_side + 2 * j + cy)] =
                            base * (1.0 + (cx == 0 ? dx : -dx)) * (1.0 + (cy == 0 ? dy : -dy));
            }
        }
        cur = std::move(next);
        side = next_side;
    }
    return make_weight_2d(spec.resolution, std::move(cur));
}

WeightFamily2D cascade_family_2d(int resolution, double delta, std::uint64_t seed) {
    const std::int64_t n = std::int64_t{1} << resolution;
    std::vector<Weight2D> members;
    members.reserve(static_cast<std::size_t>(n * n));
    for (std::int64_t idx = 0; idx < n * n; ++idx)
        members.push_back(cascade_weight_2d(
            CascadeSpec{resolution, delta, derive_seed(seed, static_cast<std::uint64_t>(idx))}));
    return make_family_2d(std::move(members));
}

WeightFamily2D smooth_family_2d(int resolution, std::uint64_t seed, int harmonics,
                                double amplitude) {
    const std::int64_t n = std::int64_t{1} << resolution;
    std::vector<Weight2D> members;
    members.reserve(static_cast<std::size_t>(n * n));
    for (std::int64_t idx = 0; idx < n * n; ++idx) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(idx)));
        const Weight u = smooth_doubling_weight(resolution, draw_trig(rng, harmonics, amplitude));
        const Weight v = smooth_doubling_weight(resolution, draw_trig(rng, harmonics, amplitude));
        members.push_back(tensor_weight(u, v));
    }
    return make_family_2d(std::move(members));
}

}  // namespace mlab
