#include "mlab/constants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlab/parallel.hpp"

namespace mlab {

namespace {

std::vector<double> apply_pow(std::span<const double> v, double e) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::pow(v[i], e);
    return out;
}

// hot path of the sweeps; common exponents avoid the libm pow
inline double pow_fast(double x, double e) {
    if (e == 1.0) return x;
    if (e == 2.0) return x * x;
    if (e == 0.5) return std::sqrt(x);
    return std::pow(x, e);
}

std::vector<double> apply_log(std::span<const double> v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::log(v[i]);
    return out;
}

std::vector<double> apply_abs(std::span<const double> v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::fabs(v[i]);
    return out;
}

// sup over every grid arc; per_length(L) must return the sup over all starts
// at that length. Lengths are independent, so the loop parallelizes.
template <class PerLength>
double sweep_lengths(std::int64_t max_len, PerLength per_length) {
    return parallel_max(1, max_len + 1, [&](std::int64_t len) { return per_length(len); });
}

// sup over dyadic intervals of level min_level..N of functional(level, index).
template <class Functional>
double sweep_dyadic(int resolution, int min_level, Functional functional) {
    double best = -std::numeric_limits<double>::infinity();
    for (int k = min_level; k <= resolution; ++k)
        for (std::int64_t j = 0; j < (std::int64_t{1} << k); ++j)
            best = std::max(best, functional(k, j));
    return best;
}

double dyadic_mean(const std::vector<std::vector<double>>& sums, int resolution, int k,
                   std::int64_t j) {
    return sums[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] /
           static_cast<double>(std::int64_t{1} << (resolution - k));
}

}  // namespace

double ap_constant(const Weight& w, double p, Scope scope) {
    if (!(p >= 1.0)) throw std::invalid_argument("ap_constant: p must be >= 1");
    const std::int64_t n = w.cells();

    if (scope == Scope::Dyadic) {
        const auto sums = dyadic_sum_pyramid(w.values);
        if (p == 1.0) {
            const auto mins = dyadic_min_pyramid(w.values);
            return sweep_dyadic(w.resolution, 0, [&](int k, std::int64_t j) {
                return dyadic_mean(sums, w.resolution, k, j) /
                       mins[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            });
        }
        if (std::isinf(p)) {
            const auto logs = dyadic_sum_pyramid(apply_log(w.values));
            return sweep_dyadic(w.resolution, 0, [&](int k, std::int64_t j) {
                return dyadic_mean(sums, w.resolution, k, j) *
                       std::exp(-dyadic_mean(logs, w.resolution, k, j));
            });
        }
        const auto invs = dyadic_sum_pyramid(apply_pow(w.values, -1.0 / (p - 1.0)));
        return sweep_dyadic(w.resolution, 0, [&](int k, std::int64_t j) {
            return dyadic_mean(sums, w.resolution, k, j) *
                   pow_fast(dyadic_mean(invs, w.resolution, k, j), p - 1.0);
        });
    }

    const CyclicPrefix pw(w.values);
    if (p == 1.0) {
        return sweep_lengths(n, [&](std::int64_t len) {
            const auto mins = cyclic_window_min(w.values, len);
            const std::int64_t starts = len == n ? 1 : n;
            double best = 0.0;
            for (std::int64_t s = 0; s < starts; ++s)
                best = std::max(best, pw.mean(s, len) / mins[static_cast<std::size_t>(s)]);
            return best;
        });
    }
    if (std::isinf(p)) {
        const CyclicPrefix plog(apply_log(w.values));
        return sweep_lengths(n, [&](std::int64_t len) {
            const std::int64_t starts = len == n ? 1 : n;
            double best = 0.0;
            for (std::int64_t s = 0; s < starts; ++s)
                best = std::max(best, pw.mean(s, len) * std::exp(-plog.mean(s, len)));
            return best;
        });
    }
    const CyclicPrefix pinv(apply_pow(w.values, -1.0 / (p - 1.0)));
    const double q = p - 1.0;
    return sweep_lengths(n, [&](std::int64_t len) {
        const std::int64_t starts = len == n ? 1 : n;
        double best = 0.0;
        for (std::int64_t s = 0; s < starts; ++s)
            best = std::max(best, pw.mean(s, len) * pow_fast(pinv.mean(s, len), q));
        return best;
    });
}

double rhp_sup_part(const Weight& w, double p, Scope scope) {
    if (!(p > 1.0)) throw std::invalid_argument("rhp_constant: p must be > 1");
    const std::int64_t n = w.cells();

    if (scope == Scope::Dyadic) {
        const auto sums = dyadic_sum_pyramid(w.values);
        if (std::isinf(p)) {
            const auto maxs = dyadic_max_pyramid(w.values);
            return sweep_dyadic(w.resolution, 0, [&](int k, std::int64_t j) {
                return maxs[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] /
                       dyadic_mean(sums, w.resolution, k, j);
            });
        }
        const auto pows = dyadic_sum_pyramid(apply_pow(w.values, p));
        return sweep_dyadic(w.resolution, 0, [&](int k, std::int64_t j) {
            return pow_fast(dyadic_mean(pows, w.resolution, k, j), 1.0 / p) /
                   dyadic_mean(sums, w.resolution, k, j);
        });
    }

    const CyclicPrefix pw(w.values);
    if (std::isinf(p)) {
        return sweep_lengths(n, [&](std::int64_t len) {
            const auto maxs = cyclic_window_max(w.values, len);
            const std::int64_t starts = len == n ? 1 : n;
            double best = 0.0;
            for (std::int64_t s = 0; s < starts; ++s)
                best = std::max(best, maxs[static_cast<std::size_t>(s)] / pw.mean(s, len));
            return best;
        });
    }
    const CyclicPrefix ppow(apply_pow(w.values, p));
    return sweep_lengths(n, [&](std::int64_t len) {
        const std::int64_t starts = len == n ? 1 : n;
        double best = 0.0;
        for (std::int64_t s = 0; s < starts; ++s)
            best = std::max(best, pow_fast(ppow.mean(s, len), 1.0 / p) / pw.mean(s, len));
        return best;
    });
}

double rhp_constant(const Weight& w, double p, Scope scope) {
    const double sup = rhp_sup_part(w, p, scope);
    if (scope == Scope::GridArcs || w.resolution == 0) return sup;
    return std::max(sup, doubling_constant(w, Scope::Dyadic));
}

double doubling_constant(const Weight& w, Scope scope) {
    if (w.resolution < 1)
        throw std::invalid_argument("doubling_constant: needs resolution >= 1");
    const std::int64_t n = w.cells();

    if (scope == Scope::Dyadic) {
        const auto sums = dyadic_sum_pyramid(w.values);
        return sweep_dyadic(w.resolution, 1, [&](int k, std::int64_t j) {
            return sums[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j / 2)] /
                   sums[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        });
    }

    // Doubling about the midpoint lands on half-cell endpoints for odd
    // lengths; sum over half cells so both masses stay exact.
    std::vector<double> half(static_cast<std::size_t>(2 * n));
    for (std::int64_t j = 0; j < 2 * n; ++j)
        half[static_cast<std::size_t>(j)] = 0.5 * w.values[static_cast<std::size_t>(j / 2)];
    const CyclicPrefix ph(half);
    return sweep_lengths(n / 2, [&](std::int64_t len) {
        double best = 0.0;
        for (std::int64_t s = 0; s < n; ++s)
            best = std::max(best, ph.sum(2 * s - len, 4 * len) / ph.sum(2 * s, 2 * len));
        return best;
    });
}

double bmo_norm(const GridFn& f, Scope scope, int exponent) {
    if (exponent != 1 && exponent != 2)
        throw std::invalid_argument("bmo_norm: exponent must be 1 or 2");
    const std::int64_t n = f.cells();

    if (scope == Scope::Dyadic) {
        const auto sums = dyadic_sum_pyramid(f.values);
        double best = 0.0;
        for (int k = 0; k <= f.resolution; ++k) {
            const std::int64_t len = std::int64_t{1} << (f.resolution - k);
            for (std::int64_t j = 0; j < (std::int64_t{1} << k); ++j) {
                const double m = dyadic_mean(sums, f.resolution, k, j);
                long double acc = 0.0L;
                for (std::int64_t c = j * len; c < (j + 1) * len; ++c) {
                    const double d = f.values[static_cast<std::size_t>(c)] - m;
                    acc += exponent == 1 ? std::fabs(d) : static_cast<long double>(d) * d;
                }
                const double osc = static_cast<double>(acc / static_cast<long double>(len));
                best = std::max(best, exponent == 1 ? osc : std::sqrt(std::max(0.0, osc)));
            }
        }
        return best;
    }

    const CyclicPrefix pf(f.values);
    if (exponent == 2) {
        std::vector<double> sq(f.values.size());
        for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = f.values[i] * f.values[i];
        const CyclicPrefix pf2(sq);
        return sweep_lengths(n, [&](std::int64_t len) {
            const std::int64_t starts = len == n ? 1 : n;
            double best = 0.0;
            for (std::int64_t s = 0; s < starts; ++s) {
                const double m = pf.mean(s, len);
                best = std::max(best, std::sqrt(std::max(0.0, pf2.mean(s, len) - m * m)));
            }
            return best;
        });
    }
    return sweep_lengths(n, [&](std::int64_t len) {
        const std::int64_t starts = len == n ? 1 : n;
        double best = 0.0;
        for (std::int64_t s = 0; s < starts; ++s) {
            const double m = pf.mean(s, len);
            long double acc = 0.0L;
            for (std::int64_t k = 0; k < len; ++k)
                acc += std::fabs(f.values[static_cast<std::size_t>(mod_cells(s + k, n))] - m);
            best = std::max(best, static_cast<double>(acc / static_cast<long double>(len)));
        }
        return best;
    });
}

GridFn hl_maximal(const GridFn& f) {
    const std::int64_t n = f.cells();
    const CyclicPrefix pabs(apply_abs(f.values));
    GridFn out{f.resolution, std::vector<double>(f.values.size(), 0.0)};
    // Arcs of length len containing cell c start in [c-len+1, c]; that is a
    // sliding-window max over the per-start means.
    std::vector<double> means(static_cast<std::size_t>(n));
    for (std::int64_t len = 1; len <= n; ++len) {
        for (std::int64_t s = 0; s < n; ++s)
            means[static_cast<std::size_t>(s)] = pabs.mean(s, len);
        const auto wmax = cyclic_window_max(means, len);
        for (std::int64_t c = 0; c < n; ++c) {
            const double cand = wmax[static_cast<std::size_t>(mod_cells(c - len + 1, n))];
            auto& slot = out.values[static_cast<std::size_t>(c)];
            slot = std::max(slot, cand);
        }
    }
    return out;
}

double maximal_norm_ratio(const Weight& w, double p, std::span<const GridFn> test_functions) {
    if (!(p > 1.0) || std::isinf(p))
        throw std::invalid_argument("maximal_norm_ratio: p must be in (1, inf)");
    if (test_functions.empty())
        throw std::invalid_argument("maximal_norm_ratio: no test functions");
    double best = 0.0;
    for (const auto& f : test_functions) {
        if (f.cells() != w.cells())
            throw std::invalid_argument("maximal_norm_ratio: resolution mismatch");
        bool all_zero = true;
        for (double v : f.values)
            if (v != 0.0) all_zero = false;
        if (all_zero)
            throw std::invalid_argument("maximal_norm_ratio: test function is identically zero");
        const GridFn mf = hl_maximal(f);
        long double num = 0.0L, den = 0.0L;
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            num += std::pow(mf.values[i], p) * w.values[i];
            den += std::pow(std::fabs(f.values[i]), p) * w.values[i];
        }
        best = std::max(best, static_cast<double>(num / den));
    }
    return best;
}

}  // namespace mlab
