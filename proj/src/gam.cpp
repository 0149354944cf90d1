#include "noveltyscope/gam.hpp"

#include <algorithm>
#include <cmath>

namespace noveltyscope {

BSplineBasis::BSplineBasis(double lo, double hi, int k) : lo_(lo), hi_(hi), k_(k) {
    if (k < 3) throw GamError("spline basis dimension must be at least 3");
    if (!(hi > lo)) throw GamError("spline variable has no spread");
    degree_ = std::min(3, k - 1);
    h_ = (hi - lo) / (k - degree_);
    knots_.resize(static_cast<std::size_t>(k + degree_ + 1));
    for (std::size_t i = 0; i < knots_.size(); ++i) knots_[i] = lo + (static_cast<double>(i) - degree_) * h_;
}

Eigen::RowVectorXd BSplineBasis::evaluate(double x) const {
    x = std::clamp(x, lo_, hi_);
    int span = degree_ + static_cast<int>(std::floor((x - lo_) / h_));
    span = std::clamp(span, degree_, k_ - 1);
    const auto& t = knots_;
    std::vector<double> n(degree_ + 1), left(degree_ + 1), right(degree_ + 1);
    n[0] = 1.0;
    for (int r = 1; r <= degree_; ++r) {
        left[r] = x - t[span + 1 - r];
        right[r] = t[span + r] - x;
        double saved = 0;
        for (int s = 0; s < r; ++s) {
            const double temp = n[s] / (right[s + 1] + left[r - s]);
            n[s] = saved + right[s + 1] * temp;
            saved = left[r - s] * temp;
        }
        n[r] = saved;
    }
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(k_);
    for (int s = 0; s <= degree_; ++s) row(span - degree_ + s) = n[s];
    return row;
}

Eigen::MatrixXd BSplineBasis::evaluate(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd b(x.size(), k_);
    for (Eigen::Index i = 0; i < x.size(); ++i) b.row(i) = evaluate(x(i));
    return b;
}

Eigen::MatrixXd difference_penalty_root(int k) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(std::max(k - 2, 0), k);
    for (int i = 0; i + 2 < k; ++i) {
        d(i, i) = 1;
        d(i, i + 1) = -2;
        d(i, i + 2) = 1;
    }
    return d;
}

Eigen::RowVectorXd SmoothTerm::design_row(double x) const { return basis.evaluate(x) * constraint; }

const SmoothTerm& GamFit::smooth(const std::string& variable) const {
    for (const auto& s : smooths)
        if (s.variable == variable) return s;
    throw GamError("no smooth for variable '" + variable + "'");
}

namespace {

struct Assembled {
    Eigen::MatrixXd x;
    Eigen::MatrixXd root;  // stacked sqrt(sp) * penalty roots over all coefficients
};

Assembled assemble(const Eigen::MatrixXd& linear, std::vector<SmoothTerm>& terms, const std::vector<SmoothInput>& smooths,
                   bool build_terms) {
    const Eigen::Index n = linear.rows();
    Eigen::Index p = linear.cols();
    Eigen::Index penalty_rows = 0;
    std::vector<Eigen::MatrixXd> blocks;
    for (std::size_t s = 0; s < smooths.size(); ++s) {
        const auto& in = smooths[s];
        if (in.values.size() != n) throw GamError("smooth '" + in.variable + "' length mismatch");
        if (build_terms) {
            SmoothTerm term;
            term.variable = in.variable;
            term.k = in.k;
            term.sp = in.sp;
            term.basis = BSplineBasis(in.values.minCoeff(), in.values.maxCoeff(), in.k);
            const Eigen::MatrixXd b = term.basis.evaluate(in.values);
            // Null space of the sum-to-zero constraint 1'B beta = 0.
            const Eigen::VectorXd c = b.colwise().sum().transpose();
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(c);
            const Eigen::MatrixXd q = qr.householderQ();
            term.constraint = q.rightCols(in.k - 1);
            const Eigen::MatrixXd xz = b * term.constraint;
            Eigen::MatrixXd root = difference_penalty_root(in.k) * term.constraint;
            // Rescale the penalty to the magnitude of the basis, as mgcv does.
            const double row_norm = xz.cwiseAbs().rowwise().sum().maxCoeff();
            const Eigen::MatrixXd s_raw = root.transpose() * root;
            const double s_norm = s_raw.cwiseAbs().colwise().sum().maxCoeff();
            if (s_norm > 0) root *= row_norm / std::sqrt(s_norm);
            term.penalty_root = root;
            term.width = in.k - 1;
            terms.push_back(std::move(term));
        }
        SmoothTerm& term = terms[s];
        term.offset = p;
        p += term.width;
        penalty_rows += term.penalty_root.rows();
        blocks.push_back(term.basis.evaluate(in.values) * term.constraint);
    }
    Assembled a;
    a.x.resize(n, p);
    a.x.leftCols(linear.cols()) = linear;
    for (std::size_t s = 0; s < terms.size(); ++s) a.x.middleCols(terms[s].offset, terms[s].width) = blocks[s];
    a.root = Eigen::MatrixXd::Zero(penalty_rows, p);
    Eigen::Index r = 0;
    for (const auto& term : terms) {
        a.root.block(r, term.offset, term.penalty_root.rows(), term.width) = std::sqrt(term.sp) * term.penalty_root;
        r += term.penalty_root.rows();
    }
    return a;
}

}  // namespace

GamFit fit_additive(const Eigen::MatrixXd& linear, std::vector<std::string> linear_names,
                    const std::vector<SmoothInput>& smooths, const Eigen::VectorXd& y) {
    if (linear.rows() != y.size()) throw GamError("fit_additive: response length mismatch");
    if (static_cast<Eigen::Index>(linear_names.size()) != linear.cols()) throw GamError("fit_additive: name count mismatch");
    for (const auto& s : smooths)
        if (s.sp < 0) throw GamError("fit_additive: negative smoothing parameter");
    GamFit fit;
    fit.linear_names = std::move(linear_names);
    Assembled a = assemble(linear, fit.smooths, smooths, true);
    const Eigen::Index n = a.x.rows(), p = a.x.cols();
    if (n < p) throw GamError("fit_additive: " + std::to_string(n) + " rows for " + std::to_string(p) + " coefficients");

    Eigen::MatrixXd aug(n + a.root.rows(), p);
    aug << a.x, a.root;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(aug.rows());
    rhs.head(n) = y;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(aug);
    if (qr.rank() < p) {
        throw GamError("fit_additive: penalized system is singular (rank " + std::to_string(qr.rank()) + " of " +
                       std::to_string(p) + ")");
    }
    fit.coef = qr.solve(rhs);
    fit.fitted = a.x * fit.coef;
    fit.rss = (y - fit.fitted).squaredNorm();
    fit.penalty = (a.root * fit.coef).squaredNorm();
    fit.n = static_cast<std::size_t>(n);

    Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    Eigen::MatrixXd a_inv = qr.colsPermutation() * (r_inv * r_inv.transpose()) * qr.colsPermutation().transpose();
    fit.edf = (a_inv * (a.x.transpose() * a.x)).trace();
    const double dof = static_cast<double>(n) - fit.edf;
    fit.sigma2 = dof > 0 ? fit.rss / dof : 0.0;
    fit.vp = fit.sigma2 * a_inv;
    return fit;
}

double penalized_objective(const GamFit& fit, const Eigen::MatrixXd& linear, const std::vector<SmoothInput>& smooths,
                           const Eigen::VectorXd& y, const Eigen::VectorXd& coef) {
    std::vector<SmoothTerm> terms = fit.smooths;
    Assembled a = assemble(linear, terms, smooths, false);
    return (y - a.x * coef).squaredNorm() + (a.root * coef).squaredNorm();
}

int gam_model_id(Response r) { return two_part_model_id(r, false) + 8; }

GamFit fit_gam(const DesignMatrix& design, const std::vector<double>& response, Response which,
               const GamOptions& options) {
    const Eigen::Index n = design.x.rows();
    if (static_cast<Eigen::Index>(response.size()) != n) throw GamError("fit_gam: response length mismatch");
    auto term_col = design.column("s_term");
    auto topic_col = design.column("s_topic");
    if (!term_col || !topic_col) throw GamError("fit_gam: design lacks novelty columns");

    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < n; ++i)
        if (response[i] > 0) rows.push_back(i);
    if (rows.empty()) throw GamError("fit_gam: no nonzero outcomes");
    const Eigen::Index m = static_cast<Eigen::Index>(rows.size());

    std::vector<Eigen::Index> keep;
    std::vector<std::string> names;
    std::vector<std::string> dropped;
    for (Eigen::Index j = 0; j < design.x.cols(); ++j) {
        const auto& info = design.columns[j];
        if (j == *term_col || j == *topic_col || info.role == ColumnRole::derived) continue;
        double lo = design.x(rows[0], j), hi = lo;
        for (Eigen::Index i : rows) {
            lo = std::min(lo, design.x(i, j));
            hi = std::max(hi, design.x(i, j));
        }
        if (info.role != ColumnRole::intercept && lo == hi) {
            dropped.push_back(info.name);
            continue;
        }
        keep.push_back(j);
        names.push_back(info.name);
    }

    Eigen::MatrixXd linear(m, static_cast<Eigen::Index>(keep.size()));
    Eigen::VectorXd y(m), term(m), topic(m);
    for (Eigen::Index r = 0; r < m; ++r) {
        const Eigen::Index i = rows[r];
        for (std::size_t c = 0; c < keep.size(); ++c) linear(r, c) = design.x(i, keep[c]);
        y(r) = response[i];
        term(r) = design.x(i, *term_col);
        topic(r) = design.x(i, *topic_col);
    }
    std::vector<SmoothInput> smooths{{"s_term", term, options.k_term, options.sp},
                                     {"s_topic", topic, options.k_topic, options.sp}};
    GamFit fit = fit_additive(linear, std::move(names), smooths, y);
    fit.model_id = gam_model_id(which);
    fit.dropped = std::move(dropped);
    return fit;
}

PartialDependence partial_dependence(const GamFit& fit, const std::string& variable, const std::vector<double>& grid) {
    const SmoothTerm& term = fit.smooth(variable);
    const Eigen::MatrixXd v = fit.vp.block(term.offset, term.offset, term.width, term.width);
    const Eigen::VectorXd b = fit.coef.segment(term.offset, term.width);
    PartialDependence pd;
    pd.variable = variable;
    for (double x : grid) {
        const Eigen::RowVectorXd row = term.design_row(x);
        const double value = row * b;
        const double var = (row * v * row.transpose())(0, 0);
        const double se = std::sqrt(std::max(var, 0.0));
        pd.grid.push_back(x);
        pd.value.push_back(value);
        pd.se.push_back(se);
        pd.ci_lo.push_back(value - 1.96 * se);
        pd.ci_hi.push_back(value + 1.96 * se);
        pd.extrapolated.push_back(x < term.basis.lo() || x > term.basis.hi());
    }
    return pd;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
    std::vector<double> g;
    if (points == 0) return g;
    if (points == 1) return {lo};
    for (std::size_t i = 0; i + 1 < points; ++i) g.push_back(lo + (hi - lo) * static_cast<double>(i) / (points - 1));
    g.push_back(hi);
    return g;
}

}  // namespace noveltyscope
