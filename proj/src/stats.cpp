#include "noveltyscope/stats.hpp"

#include "noveltyscope/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace noveltyscope {

std::vector<std::optional<double>> log_zscore_by_fandom(std::span<const double> values,
                                                        std::span<const std::string> fandoms) {
    if (values.size() != fandoms.size()) throw StatsError("log_zscore_by_fandom: length mismatch");
    struct Acc {
        double sum = 0, sumsq = 0;
        std::size_t n = 0;
    };
    std::vector<double> logs(values.size());
    std::map<std::string, Acc> acc;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0)) throw StatsError("log_zscore_by_fandom: negative value");
        logs[i] = std::log1p(values[i]);
        acc[fandoms[i]].sum += logs[i];
        acc[fandoms[i]].n += 1;
    }
    std::map<std::string, std::pair<double, double>> moments;
    for (auto& [f, a] : acc) moments[f].first = a.sum / static_cast<double>(a.n);
    for (std::size_t i = 0; i < values.size(); ++i) {
        double d = logs[i] - moments[fandoms[i]].first;
        acc[fandoms[i]].sumsq += d * d;
    }
    for (auto& [f, a] : acc) moments[f].second = std::sqrt(a.sumsq / static_cast<double>(a.n));

    std::vector<std::optional<double>> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& [mean, sd] = moments[fandoms[i]];
        if (sd > 0) out[i] = (logs[i] - mean) / sd;
    }
    return out;
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BinnedCurve binned_curve(std::span<const double> novelty, std::span<const double> z, double bin_width,
                         std::size_t n_boot, std::uint64_t seed) {
    if (!(bin_width > 0)) throw StatsError("binned_curve: bin width must be positive");
    if (novelty.size() != z.size()) throw StatsError("binned_curve: length mismatch");
    if (n_boot == 0) throw StatsError("binned_curve: need at least one bootstrap resample");

    const double ratio = 1.0 / bin_width;
    const auto bins = static_cast<std::size_t>(std::max(1.0, std::ceil(ratio - 1e-9)));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    BinnedCurve curve;
    curve.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) curve.edges[b] = std::min(1.0, static_cast<double>(b) * bin_width);
    curve.edges.back() = 1.0;

    std::vector<std::vector<double>> members(bins);
    for (std::size_t i = 0; i < novelty.size(); ++i) {
        auto b = static_cast<long long>(std::floor(novelty[i] / bin_width));
        b = std::clamp<long long>(b, 0, static_cast<long long>(bins) - 1);
        members[b].push_back(z[i]);
    }

    curve.count.resize(bins);
    curve.mean.assign(bins, nan);
    curve.ci_lo.assign(bins, nan);
    curve.ci_hi.assign(bins, nan);
    std::vector<double> boot(n_boot);
    for (std::size_t b = 0; b < bins; ++b) {
        const auto& v = members[b];
        curve.count[b] = v.size();
        if (v.empty()) continue;
        double sum = 0;
        for (double x : v) sum += x;
        const double mean = sum / static_cast<double>(v.size());
        curve.mean[b] = mean;

        Rng rng(derive_seed(seed, b));
        for (std::size_t r = 0; r < n_boot; ++r) {
            double s = 0;
            for (std::size_t i = 0; i < v.size(); ++i) s += v[uniform_index(rng, v.size())];
            boot[r] = s / static_cast<double>(v.size());
        }
        std::sort(boot.begin(), boot.end());
        // The sample mean always lies inside the reported interval.
        curve.ci_lo[b] = std::min(quantile_sorted(boot, 0.025), mean);
        curve.ci_hi[b] = std::max(quantile_sorted(boot, 0.975), mean);
    }
    return curve;
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& data) {
    if (data.rows() < 2) throw StatsError("correlation_matrix: need at least two rows");
    Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
    Eigen::VectorXd norms = centered.colwise().norm();
    for (Eigen::Index j = 0; j < norms.size(); ++j) {
        if (!(norms(j) > 0)) throw StatsError("correlation_matrix: column " + std::to_string(j) + " has zero variance");
    }
    Eigen::MatrixXd corr = centered.transpose() * centered;
    corr = norms.cwiseInverse().asDiagonal() * corr * norms.cwiseInverse().asDiagonal();
    for (Eigen::Index j = 0; j < corr.rows(); ++j) corr(j, j) = 1.0;
    return (corr + corr.transpose()) / 2.0;
}

}  // namespace noveltyscope
