#pragma once

#include "noveltyscope/corpus.hpp"
#include "noveltyscope/stats.hpp"
#include "noveltyscope/term_novelty.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace noveltyscope {

class RegressionError : public StatsError {
public:
    using StatsError::StatsError;
};

class SeparationError : public RegressionError {
public:
    using RegressionError::RegressionError;
};

enum class ColumnRole { intercept, predictor, control, derived };
enum class ColumnKind { numeric, indicator };

struct ColumnInfo {
    std::string name;
    ColumnRole role = ColumnRole::control;
    ColumnKind kind = ColumnKind::numeric;
    std::string family;  // categorical family of an indicator column
};

struct DesignMatrix {
    std::vector<std::string> row_ids;
    std::vector<ColumnInfo> columns;
    Eigen::MatrixXd x;
    std::map<std::string, std::string> reference_levels;  // family -> dropped level

    std::optional<Eigen::Index> column(const std::string& name) const;
    std::vector<std::string> names() const;
};

struct ModelSpec {
    bool with_squares = false;
    bool include_age = false;
};

// Per-corpus facts the design needs beyond the rows themselves.
struct DesignContext {
    std::unordered_map<std::string, std::size_t> author_work_counts;
    std::map<std::string, std::set<std::string>> top_relationships;  // fandom -> top five
    Date age_reference;
};

// Top five relationships per fandom over `population`; ties broken lexicographically.
std::map<std::string, std::set<std::string>> top_relationships(const WorkSet& population, std::size_t top = 5);
DesignContext make_context(const CorpusStore& store, const WorkSet& population);

// Works of `population` with both novelty scores present, in population order.
std::vector<const Work*> scored_works(const WorkSet& population,
                                      const std::map<std::string, NoveltyRecord>& novelty);

// Throws RegressionError if a row lacks either novelty score.
DesignMatrix build_design(const std::vector<const Work*>& rows, const std::map<std::string, NoveltyRecord>& novelty,
                          const ModelSpec& spec, const DesignContext& context);

struct VifReport {
    std::vector<std::string> names;
    std::vector<double> values;  // +inf on exact collinearity
    std::vector<std::string> flagged;
};

inline constexpr double kVifThreshold = 10.0;

// VIF of every numeric non-intercept column against all other columns.
VifReport vif(const DesignMatrix& design, double threshold = kVifThreshold);

struct OlsFit {
    std::vector<std::string> names;
    Eigen::VectorXd coef;
    Eigen::VectorXd se;
    Eigen::VectorXd residuals;
    double r2 = 0;
    double sigma2 = 0;
    double normal_residual = 0;  // normal_equation_residual at coef
    std::size_t n = 0;

    double ci_lo(Eigen::Index j) const { return coef(j) - 1.96 * se(j); }
    double ci_hi(Eigen::Index j) const { return coef(j) + 1.96 * se(j); }
};

// Least squares by column-pivoted Householder QR; classical standard errors.
// Throws RegressionError when X is rank deficient or has fewer rows than columns.
OlsFit fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::vector<std::string> names);

// max |X'(y - X b)| / max |X'y|
double normal_equation_residual(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& coef);

struct LogisticFit {
    std::vector<std::string> names;
    Eigen::VectorXd coef;
    Eigen::VectorXd se;
    Eigen::VectorXd probabilities;
    std::vector<double> log_likelihood;  // per accepted iterate
    double gradient_norm = 0;             // max |X'(y - p)| at the returned coefficients
    int iterations = 0;
    bool converged = false;
};

inline constexpr double kLogisticTolerance = 1e-8;
inline constexpr int kLogisticMaxIterations = 100;

// IRLS with step halving. Throws RegressionError if a class is absent,
// SeparationError on complete separation.
LogisticFit fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& labels, std::vector<std::string> names);

struct TwoPartFit {
    int model_id = 0;
    Response response = Response::kudos;
    bool with_squares = false;
    std::optional<LogisticFit> stage1;  // absent when no zero outcomes exist
    OlsFit stage2;
    std::vector<std::string> dropped;   // constant within the nonzero subset
    // Constant columns, and indicators whose level perfectly predicts the label, left out of stage 1.
    std::vector<std::string> stage1_dropped;
    std::size_t n_total = 0;
    std::size_t n_nonzero = 0;
};

int two_part_model_id(Response r, bool with_squares);

inline constexpr const char* kStage1Column = "p_nonzero";
inline constexpr const char* kIntercept = "(Intercept)";

// `response` holds per-chapter values aligned with design rows.
TwoPartFit fit_two_part(const DesignMatrix& design, const std::vector<double>& response, Response which,
                        bool with_squares);

}  // namespace noveltyscope
