#include "noveltyscope/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace noveltyscope {

namespace {


std::string warning_level(const Work& w) {
    if (w.archive_warnings.empty()) return "(none)";
    std::vector<std::string> sorted = w.archive_warnings;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::string s;
    for (std::size_t i = 0; i < sorted.size(); ++i) s += (i ? "|" : "") + sorted[i];
    return s;
}

// Most frequent level first (ties: smaller string), then the rest in lexicographic order.
std::pair<std::string, std::vector<std::string>> levels_with_reference(const std::vector<std::string>& values) {
    std::map<std::string, std::size_t> freq;
    for (const auto& v : values) ++freq[v];
    std::string reference;
    std::size_t best = 0;
    for (const auto& [level, n] : freq) {
        if (n > best) {
            best = n;
            reference = level;
        }
    }
    std::vector<std::string> others;
    for (const auto& [level, _] : freq)
        if (level != reference) others.push_back(level);
    return {reference, others};
}

}  // namespace

std::optional<Eigen::Index> DesignMatrix::column(const std::string& name) const {
    for (std::size_t j = 0; j < columns.size(); ++j)
        if (columns[j].name == name) return static_cast<Eigen::Index>(j);
    return std::nullopt;
}

std::vector<std::string> DesignMatrix::names() const {
    std::vector<std::string> out;
    for (const auto& c : columns) out.push_back(c.name);
    return out;
}

std::map<std::string, std::set<std::string>> top_relationships(const WorkSet& population, std::size_t top) {
    std::map<std::string, std::map<std::string, std::size_t>> counts;
    for (const Work* w : population.works) {
        std::set<std::string> distinct(w->relationships.begin(), w->relationships.end());
        for (const auto& r : distinct) ++counts[w->fandom][r];
    }
    std::map<std::string, std::set<std::string>> out;
    for (const auto& [fandom, c] : counts) {
        std::vector<std::pair<std::string, std::size_t>> ranked(c.begin(), c.end());
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
        auto& set = out[fandom];
        for (std::size_t i = 0; i < ranked.size() && i < top; ++i) set.insert(ranked[i].first);
    }
    return out;
}

DesignContext make_context(const CorpusStore& store, const WorkSet& population) {
    DesignContext ctx;
    ctx.author_work_counts = store.author_work_counts();
    ctx.top_relationships = top_relationships(population);
    for (const auto& w : store.works()) ctx.age_reference = std::max(ctx.age_reference, w.update_date);
    return ctx;
}

std::vector<const Work*> scored_works(const WorkSet& population, const std::map<std::string, NoveltyRecord>& novelty) {
    std::vector<const Work*> out;
    for (const Work* w : population.works) {
        auto it = novelty.find(w->id);
        if (it != novelty.end() && it->second.s_term && it->second.s_topic) out.push_back(w);
    }
    return out;
}

DesignMatrix build_design(const std::vector<const Work*>& rows, const std::map<std::string, NoveltyRecord>& novelty,
                          const ModelSpec& spec, const DesignContext& context) {
    const std::size_t n = rows.size();
    if (n == 0) throw RegressionError("build_design: no rows");
    std::vector<double> term(n), topic(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = novelty.find(rows[i]->id);
        if (it == novelty.end() || !it->second.s_term || !it->second.s_topic) {
            throw RegressionError("build_design: work " + rows[i]->id + " has UNSCORED novelty");
        }
        term[i] = *it->second.s_term;
        topic[i] = *it->second.s_topic;
    }

    DesignMatrix d;
    std::vector<std::vector<double>> cols;
    auto add = [&](ColumnInfo info, std::vector<double> values) {
        d.columns.push_back(std::move(info));
        cols.push_back(std::move(values));
    };

    add({kIntercept, ColumnRole::intercept, ColumnKind::numeric, ""}, std::vector<double>(n, 1.0));
    if (spec.with_squares) {
        auto center = [](std::vector<double>& v) {
            double m = 0;
            for (double x : v) m += x;
            m /= static_cast<double>(v.size());
            for (double& x : v) x -= m;
            // A second pass removes the residual rounding of the first mean.
            double r = 0;
            for (double x : v) r += x;
            r /= static_cast<double>(v.size());
            for (double& x : v) x -= r;
        };
        center(term);
        center(topic);
    }
    add({"s_term", ColumnRole::predictor, ColumnKind::numeric, ""}, term);
    add({"s_topic", ColumnRole::predictor, ColumnKind::numeric, ""}, topic);
    if (spec.with_squares) {
        std::vector<double> tsq(n), psq(n);
        for (std::size_t i = 0; i < n; ++i) {
            tsq[i] = term[i] * term[i];
            psq[i] = topic[i] * topic[i];
        }
        add({"s_term_sq", ColumnRole::derived, ColumnKind::numeric, ""}, tsq);
        add({"s_topic_sq", ColumnRole::derived, ColumnKind::numeric, ""}, psq);
    }

    std::vector<double> chapters(n), authors(n), age(n), frequent(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Work& w = *rows[i];
        chapters[i] = w.chapters;
        auto a = context.author_work_counts.find(w.author);
        authors[i] = a == context.author_work_counts.end() ? 1.0 : static_cast<double>(a->second);
        age[i] = static_cast<double>(w.update_date.days_until(context.age_reference));
        auto top = context.top_relationships.find(w.fandom);
        frequent[i] = 0.0;
        if (top != context.top_relationships.end()) {
            for (const auto& r : w.relationships)
                if (top->second.contains(r)) frequent[i] = 1.0;
        }
    }
    add({"chapters", ColumnRole::control, ColumnKind::numeric, ""}, chapters);
    add({"author_work_count", ColumnRole::control, ColumnKind::numeric, ""}, authors);
    if (spec.include_age) add({"age_days", ColumnRole::control, ColumnKind::numeric, ""}, age);
    add({"frequent_relationship", ColumnRole::control, ColumnKind::indicator, ""}, frequent);

    auto add_family = [&](const std::string& family, auto level_of) {
        std::vector<std::string> values(n);
        for (std::size_t i = 0; i < n; ++i) values[i] = level_of(*rows[i]);
        auto [reference, others] = levels_with_reference(values);
        d.reference_levels[family] = reference;
        for (const auto& level : others) {
            std::vector<double> ind(n);
            for (std::size_t i = 0; i < n; ++i) ind[i] = values[i] == level ? 1.0 : 0.0;
            add({family + "=" + level, ColumnRole::control, ColumnKind::indicator, family}, std::move(ind));
        }
    };
    add_family("fandom", [](const Work& w) { return w.fandom; });
    add_family("rating", [](const Work& w) { return w.rating; });
    add_family("category", [](const Work& w) { return w.category; });
    add_family("archive_warnings", warning_level);

    d.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) d.x(i, j) = cols[j][i];
    for (const Work* w : rows) d.row_ids.push_back(w->id);
    return d;
}

OlsFit fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::vector<std::string> names) {
    const Eigen::Index n = x.rows(), p = x.cols();
    if (y.size() != n) throw RegressionError("fit_ols: response length mismatch");
    if (n < p) {
        throw RegressionError("fit_ols: " + std::to_string(n) + " rows for " + std::to_string(p) + " columns");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < p) {
        throw RegressionError("fit_ols: design rank " + std::to_string(qr.rank()) + " < " + std::to_string(p) +
                              " columns");
    }
    OlsFit fit;
    fit.names = std::move(names);
    fit.n = static_cast<std::size_t>(n);
    fit.coef = qr.solve(y);
    fit.residuals = y - x * fit.coef;
    const double rss = fit.residuals.squaredNorm();
    const double tss = (y.array() - y.mean()).square().sum();
    fit.r2 = tss > 0 ? 1.0 - rss / tss : 1.0;
    fit.sigma2 = n > p ? rss / static_cast<double>(n - p) : 0.0;

    Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    Eigen::MatrixXd cov_perm = r_inv * r_inv.transpose();
    Eigen::MatrixXd cov = qr.colsPermutation() * cov_perm * qr.colsPermutation().transpose();
    fit.se = (fit.sigma2 * cov.diagonal()).cwiseSqrt();
    fit.normal_residual = normal_equation_residual(x, y, fit.coef);
    return fit;
}

double normal_equation_residual(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& coef) {
    const double scale = (x.transpose() * y).cwiseAbs().maxCoeff();
    const double r = (x.transpose() * (y - x * coef)).cwiseAbs().maxCoeff();
    return scale > 0 ? r / scale : r;
}

namespace {

double log_likelihood(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
    double ll = 0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double e = eta(i);
        ll += y(i) * e - (std::max(e, 0.0) + std::log1p(std::exp(-std::abs(e))));
    }
    return ll;
}

Eigen::VectorXd sigmoid(const Eigen::VectorXd& eta) {
    Eigen::VectorXd p(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double e = eta(i);
        p(i) = e >= 0 ? 1.0 / (1.0 + std::exp(-e)) : std::exp(e) / (1.0 + std::exp(e));
    }
    return p;
}

}  // namespace

LogisticFit fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& labels, std::vector<std::string> names) {
    const Eigen::Index n = x.rows(), p = x.cols();
    if (labels.size() != n) throw RegressionError("fit_logistic: label length mismatch");
    const double positives = labels.sum();
    if (positives <= 0 || positives >= static_cast<double>(n)) {
        throw RegressionError("fit_logistic: both classes must be present");
    }

    LogisticFit fit;
    fit.names = std::move(names);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd eta = x * beta;
    double ll = log_likelihood(eta, labels);
    fit.log_likelihood.push_back(ll);
    Eigen::MatrixXd hessian(p, p);

    for (int it = 0; it < kLogisticMaxIterations; ++it) {
        Eigen::VectorXd prob = sigmoid(eta);
        Eigen::VectorXd grad = x.transpose() * (labels - prob);
        fit.gradient_norm = grad.cwiseAbs().maxCoeff();
        if (fit.gradient_norm < kLogisticTolerance) {
            fit.converged = true;
            break;
        }
        Eigen::VectorXd w = prob.array() * (1.0 - prob.array());
        hessian.noalias() = x.transpose() * w.asDiagonal() * x;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(hessian);
        if (qr.rank() < p) {
            // Weights collapsing to zero on every row is the signature of separation.
            if (w.maxCoeff() < 1e-10) throw SeparationError("fit_logistic: complete separation detected");
            throw RegressionError("fit_logistic: information matrix is singular");
        }
        Eigen::VectorXd step = qr.solve(grad);

        double scale = 1.0;
        Eigen::VectorXd candidate;
        double cand_ll = -std::numeric_limits<double>::infinity();
        for (int halving = 0; halving < 40; ++halving) {
            candidate = beta + scale * step;
            Eigen::VectorXd cand_eta = x * candidate;
            cand_ll = log_likelihood(cand_eta, labels);
            if (std::isfinite(cand_ll) && cand_ll >= ll - 1e-12 * std::abs(ll)) {
                eta = std::move(cand_eta);
                break;
            }
            scale *= 0.5;
        }
        if (!std::isfinite(cand_ll) || cand_ll < ll - 1e-12 * std::abs(ll)) {
            throw RegressionError("fit_logistic: line search failed");
        }
        beta = std::move(candidate);
        ll = std::max(ll, cand_ll);
        fit.log_likelihood.push_back(ll);
        fit.iterations = it + 1;
        if (!beta.allFinite() || beta.cwiseAbs().maxCoeff() > 1e4) {
            throw SeparationError("fit_logistic: coefficients diverge (complete separation)");
        }
    }

    fit.coef = beta;
    fit.probabilities = sigmoid(eta);
    const double worst = (fit.probabilities - labels).cwiseAbs().maxCoeff();
    if (worst < 1e-6) throw SeparationError("fit_logistic: fitted probabilities reproduce labels exactly (separation)");
    if (!fit.converged) {
        Eigen::VectorXd grad = x.transpose() * (labels - fit.probabilities);
        fit.gradient_norm = grad.cwiseAbs().maxCoeff();
    }
    Eigen::VectorXd w = fit.probabilities.array() * (1.0 - fit.probabilities.array());
    hessian.noalias() = x.transpose() * w.asDiagonal() * x;
    fit.se = hessian.ldlt().solve(Eigen::MatrixXd::Identity(p, p)).diagonal().cwiseSqrt();
    return fit;
}

int two_part_model_id(Response r, bool with_squares) {
    int base = 0;
    switch (r) {
        case Response::kudos: base = 1; break;
        case Response::hits: base = 2; break;
        case Response::comments: base = 3; break;
        case Response::bookmarks: base = 4; break;
    }
    return base + (with_squares ? 4 : 0);
}

TwoPartFit fit_two_part(const DesignMatrix& design, const std::vector<double>& response, Response which,
                        bool with_squares) {
    const Eigen::Index n = design.x.rows();
    if (static_cast<Eigen::Index>(response.size()) != n) throw RegressionError("fit_two_part: response length mismatch");
    TwoPartFit fit;
    fit.model_id = two_part_model_id(which, with_squares);
    fit.response = which;
    fit.with_squares = with_squares;
    fit.n_total = static_cast<std::size_t>(n);

    Eigen::VectorXd labels(n);
    std::vector<Eigen::Index> nonzero;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (response[i] < 0) throw RegressionError("fit_two_part: negative response");
        labels(i) = response[i] > 0 ? 1.0 : 0.0;
        if (response[i] > 0) nonzero.push_back(i);
    }
    fit.n_nonzero = nonzero.size();
    if (nonzero.empty()) throw RegressionError("fit_two_part: no nonzero outcomes");

    const bool has_zeros = fit.n_nonzero < static_cast<std::size_t>(n);
    if (has_zeros) {
        std::vector<Eigen::Index> varying;
        std::vector<std::string> varying_names;
        for (Eigen::Index j = 0; j < design.x.cols(); ++j) {
            const auto& info = design.columns[j];
            bool keep = info.role == ColumnRole::intercept || design.x.col(j).maxCoeff() != design.x.col(j).minCoeff();
            if (keep && info.kind == ColumnKind::indicator) {
                // Quasi-separation: every row at this level shares one label.
                bool seen0 = false, seen1 = false;
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (design.x(i, j) != 1.0) continue;
                    (labels(i) > 0 ? seen1 : seen0) = true;
                }
                keep = seen0 && seen1;
            }
            if (keep) {
                varying.push_back(j);
                varying_names.push_back(info.name);
            } else {
                fit.stage1_dropped.push_back(info.name);
            }
        }
        Eigen::MatrixXd x1(n, static_cast<Eigen::Index>(varying.size()));
        for (std::size_t j = 0; j < varying.size(); ++j) x1.col(j) = design.x.col(varying[j]);
        fit.stage1 = fit_logistic(x1, labels, std::move(varying_names));
    }

    std::vector<std::string> names = design.names();
    Eigen::Index cols = design.x.cols() + (has_zeros ? 1 : 0);
    if (has_zeros) names.push_back(kStage1Column);
    Eigen::MatrixXd sub(static_cast<Eigen::Index>(nonzero.size()), cols);
    Eigen::VectorXd y(static_cast<Eigen::Index>(nonzero.size()));
    for (std::size_t r = 0; r < nonzero.size(); ++r) {
        const Eigen::Index i = nonzero[r];
        sub.row(r).head(design.x.cols()) = design.x.row(i);
        if (has_zeros) sub(r, cols - 1) = fit.stage1->probabilities(i);
        if (!(response[i] > 0)) throw RegressionError("fit_two_part: zero response reached stage 2");
        y(r) = std::log(response[i]);
    }

    std::vector<Eigen::Index> keep;
    std::vector<std::string> kept_names;
    for (Eigen::Index j = 0; j < cols; ++j) {
        const bool intercept = names[j] == kIntercept;
        if (!intercept && sub.col(j).maxCoeff() == sub.col(j).minCoeff()) {
            fit.dropped.push_back(names[j]);
            continue;
        }
        keep.push_back(j);
        kept_names.push_back(names[j]);
    }
    Eigen::MatrixXd x2(sub.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) x2.col(j) = sub.col(keep[j]);
    if (x2.rows() < x2.cols()) {
        throw RegressionError("fit_two_part: " + std::to_string(x2.rows()) + " nonzero rows for " +
                              std::to_string(x2.cols()) + " columns");
    }
    fit.stage2 = fit_ols(x2, y, std::move(kept_names));
    return fit;
}

VifReport vif(const DesignMatrix& design, double threshold) {
    VifReport report;
    std::vector<Eigen::Index> numeric;
    for (std::size_t j = 0; j < design.columns.size(); ++j) {
        const auto& c = design.columns[j];
        if (c.kind == ColumnKind::numeric && c.role != ColumnRole::intercept) numeric.push_back(static_cast<Eigen::Index>(j));
    }
    if (numeric.size() < 2) throw RegressionError("vif: need at least two numeric columns");
    const Eigen::Index p = design.x.cols();
    for (Eigen::Index j : numeric) {
        Eigen::MatrixXd others(design.x.rows(), p - 1);
        for (Eigen::Index c = 0, o = 0; c < p; ++c)
            if (c != j) others.col(o++) = design.x.col(c);
        const Eigen::VectorXd y = design.x.col(j);
        Eigen::VectorXd b = others.colPivHouseholderQr().solve(y);
        const double rss = (y - others * b).squaredNorm();
        const double tss = (y.array() - y.mean()).square().sum();
        double value = std::numeric_limits<double>::infinity();
        if (tss > 0 && rss > 1e-10 * tss) value = tss / rss;  // 1 / (1 - R^2)
        report.names.push_back(design.columns[j].name);
        report.values.push_back(value);
        if (value > threshold) report.flagged.push_back(design.columns[j].name);
    }
    return report;
}

}  // namespace noveltyscope
