#pragma once

#include "noveltyscope/corpus.hpp"
#include "noveltyscope/regression.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace noveltyscope {

class GamError : public RegressionError {
public:
    using RegressionError::RegressionError;
};

// Equally spaced B-spline basis of dimension k on [lo, hi]. Degree is 3 when
// k >= 4, otherwise k - 1.
class BSplineBasis {
public:
    BSplineBasis(double lo, double hi, int k);

    int dimension() const { return k_; }
    int degree() const { return degree_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<double>& knots() const { return knots_; }

    // Values outside [lo, hi] are clamped to the boundary.
    Eigen::RowVectorXd evaluate(double x) const;
    Eigen::MatrixXd evaluate(const Eigen::VectorXd& x) const;

private:
    double lo_, hi_;
    int k_, degree_;
    double h_;
    std::vector<double> knots_;
};

// Second-order difference matrix, (k - 2) x k.
Eigen::MatrixXd difference_penalty_root(int k);

struct SmoothInput {
    std::string variable;
    Eigen::VectorXd values;
    int k = 7;
    double sp = 0.1;
};

struct SmoothTerm {
    std::string variable;
    int k = 0;
    double sp = 0;
    BSplineBasis basis{0.0, 1.0, 4};
    Eigen::MatrixXd constraint;    // k x (k - 1); columns span the centered subspace
    Eigen::MatrixXd penalty_root;  // rows x (k - 1), already scaled; S = sp * R'R
    Eigen::Index offset = 0;       // first coefficient in GamFit::coef
    Eigen::Index width = 0;

    Eigen::RowVectorXd design_row(double x) const;
};

struct GamFit {
    int model_id = 0;
    std::vector<std::string> linear_names;
    std::vector<SmoothTerm> smooths;
    Eigen::VectorXd coef;
    Eigen::MatrixXd vp;  // Bayesian posterior covariance sigma^2 (X'X + S)^-1
    Eigen::VectorXd fitted;
    double rss = 0;
    double penalty = 0;  // beta' S beta
    double edf = 0;
    double sigma2 = 0;
    std::size_t n = 0;
    std::vector<std::string> dropped;

    const SmoothTerm& smooth(const std::string& variable) const;
    double objective() const { return rss + penalty; }
};

inline constexpr int kDefaultTermBasis = 7;
inline constexpr int kDefaultTopicBasis = 5;
inline constexpr double kDefaultSmoothing = 0.1;

// Penalized least squares with linear columns and centered smooths.
// Throws GamError when the penalized system is singular.
GamFit fit_additive(const Eigen::MatrixXd& linear, std::vector<std::string> linear_names,
                    const std::vector<SmoothInput>& smooths, const Eigen::VectorXd& y);

// Penalized objective ||y - X b||^2 + b' S b at arbitrary coefficients.
double penalized_objective(const GamFit& fit, const Eigen::MatrixXd& linear,
                           const std::vector<SmoothInput>& smooths, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& coef);

int gam_model_id(Response r);

struct GamOptions {
    int k_term = kDefaultTermBasis;
    int k_topic = kDefaultTopicBasis;
    double sp = kDefaultSmoothing;
};

// Smooths of s_term and s_topic plus every other design column linearly, fitted
// on the rows with a nonzero response. The response is not log-transformed.
GamFit fit_gam(const DesignMatrix& design, const std::vector<double>& response, Response which,
               const GamOptions& options = {});

struct PartialDependence {
    std::string variable;
    std::vector<double> grid;
    std::vector<double> value;
    std::vector<double> se;
    std::vector<double> ci_lo;
    std::vector<double> ci_hi;
    std::vector<bool> extrapolated;
};

// Throws GamError if `variable` has no smooth in the fit.
PartialDependence partial_dependence(const GamFit& fit, const std::string& variable, const std::vector<double>& grid);

std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

}  // namespace noveltyscope
