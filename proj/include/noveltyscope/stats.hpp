#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace noveltyscope {

class StatsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ln(1 + x), then standardized within each group by the group mean and population
// standard deviation. Groups with zero variance yield nullopt for all their members.
std::vector<std::optional<double>> log_zscore_by_fandom(std::span<const double> values,
                                                        std::span<const std::string> fandoms);

struct BinnedCurve {
    std::vector<double> edges;  // bins + 1
    std::vector<std::size_t> count;
    std::vector<double> mean;   // NaN for empty bins
    std::vector<double> ci_lo;  // NaN for empty bins
    std::vector<double> ci_hi;

    std::size_t bins() const { return count.size(); }
};

inline constexpr std::size_t kDefaultBootstrap = 1000;

// Equal-width bins over [0, 1]; per-bin mean of z with a percentile bootstrap
// 95% interval. Throws StatsError on a nonpositive width or length mismatch.
BinnedCurve binned_curve(std::span<const double> novelty, std::span<const double> z, double bin_width,
                         std::size_t n_boot = kDefaultBootstrap, std::uint64_t seed = 1);

// Linear-interpolation sample quantile (R type 7) of sorted data.
double quantile_sorted(std::span<const double> sorted, double q);

// Pearson correlation of the columns of `data`. Throws StatsError on fewer
// than two rows or a zero-variance column.
Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& data);

}  // namespace noveltyscope
