#include "mlab/averaging.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mlab {

WeightFamily make_family(std::vector<Weight> members, std::vector<std::uint8_t> mask) {
    if (members.empty()) throw std::invalid_argument("family: no members");
    const int resolution = members[0].resolution;
    const std::int64_t n = std::int64_t{1} << resolution;
    if (static_cast<std::int64_t>(members.size()) != n)
        throw std::invalid_argument("family: expected " + std::to_string(n) +
                                    " members at resolution " + std::to_string(resolution) +
                                    ", got " + std::to_string(members.size()));
    for (std::size_t i = 0; i < members.size(); ++i)
        if (members[i].resolution != resolution)
            throw std::invalid_argument("family: member " + std::to_string(i) +
                                        " has mismatched resolution");
    if (mask.empty()) mask.assign(members.size(), 1);
    if (mask.size() != members.size())
        throw std::invalid_argument("family: mask length mismatch");
    std::int64_t active = 0;
    for (auto b : mask) active += b ? 1 : 0;
    if (active == 0) throw std::invalid_argument("family: mask selects no members");
    return WeightFamily{resolution, std::move(members), std::move(mask)};
}

std::int64_t mask_count(const WeightFamily& fam) {
    std::int64_t active = 0;
    for (auto b : fam.mask) active += b ? 1 : 0;
    return active;
}

std::pair<WeightFamily, NormalizationRecord> normalize_logmean(const WeightFamily& fam) {
    NormalizationRecord record;
    record.log_means.resize(fam.members.size());
    std::vector<Weight> normalized;
    normalized.reserve(fam.members.size());
    long double masked_mean_acc = 0.0L;
    std::int64_t active = 0;
    for (std::size_t i = 0; i < fam.members.size(); ++i) {
        const auto& m = fam.members[i];
        long double acc = 0.0L;
        for (double v : m.values) acc += std::log(v);
        const double log_mean = static_cast<double>(acc / static_cast<long double>(m.cells()));
        record.log_means[i] = log_mean;
        if (fam.mask[i]) {
            masked_mean_acc += log_mean;
            ++active;
        }
        normalized.push_back(scale_weight(m, std::exp(-log_mean)));
    }
    record.grand_factor = std::exp(static_cast<double>(masked_mean_acc / active));
    return {make_family(std::move(normalized), fam.mask), std::move(record)};
}

WeightFamily denormalize(const WeightFamily& fam, const NormalizationRecord& record) {
    if (record.log_means.size() != fam.members.size())
        throw std::invalid_argument("denormalize: record length mismatch");
    std::vector<Weight> members;
    members.reserve(fam.members.size());
    for (std::size_t i = 0; i < fam.members.size(); ++i)
        members.push_back(scale_weight(fam.members[i], std::exp(record.log_means[i])));
    return make_family(std::move(members), fam.mask);
}

Weight ga_average(const WeightFamily& fam) {
    const GridFn avg_log = shifted_average(member_logs(fam), fam.mask);
    return exp_weight(avg_log);
}

Weight translation_average(const WeightFamily& fam) {
    std::vector<GridFn> grids;
    grids.reserve(fam.members.size());
    for (const auto& m : fam.members) grids.push_back(to_grid(m));
    const GridFn avg = shifted_average(grids, fam.mask);
    return make_weight(fam.resolution, avg.values);
}

Weight ap_factor_product(const Weight& w1, const Weight& w2, double p) {
    if (!(p > 1.0) || std::isinf(p))
        throw std::invalid_argument("ap_factor_product: p must be in (1, inf)");
    if (w1.resolution != w2.resolution)
        throw std::invalid_argument("ap_factor_product: resolution mismatch");
    std::vector<double> vals(w1.values.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        vals[i] = w1.values[i] * std::pow(w2.values[i], 1.0 - p);
    return make_weight(w1.resolution, std::move(vals));
}

WeightFamily coarsen(const WeightFamily& fam, int levels) {
    if (levels < 0 || levels > fam.resolution)
        throw std::invalid_argument("coarsen: levels out of range");
    const std::int64_t step = std::int64_t{1} << levels;
    std::vector<Weight> members;
    std::vector<std::uint8_t> mask;
    const std::int64_t m = static_cast<std::int64_t>(fam.members.size()) / step;
    members.reserve(static_cast<std::size_t>(m));
    mask.reserve(static_cast<std::size_t>(m));
    for (std::int64_t j = 0; j < m; ++j) {
        members.push_back(coarsen(fam.members[static_cast<std::size_t>(j * step)], levels));
        mask.push_back(fam.mask[static_cast<std::size_t>(j * step)]);
    }
    return make_family(std::move(members), std::move(mask));
}

std::vector<GridFn> member_logs(const WeightFamily& fam) {
    std::vector<GridFn> logs;
    logs.reserve(fam.members.size());
    for (const auto& m : fam.members) logs.push_back(log_values(m));
    return logs;
}

}  // namespace mlab
