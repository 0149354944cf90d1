#include "noveltyscope/term_novelty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <map>
#include <unordered_map>

namespace noveltyscope {

bool TermVector::is_zero() const {
    return std::all_of(weights.begin(), weights.end(), [](const auto& e) { return e.second == 0.0; });
}

double TermVector::norm() const {
    double s = 0;
    for (const auto& [_, w] : weights) s += w * w;
    return std::sqrt(s);
}

double TermVector::at(TermId id) const {
    auto it = std::lower_bound(weights.begin(), weights.end(), id,
                               [](const auto& e, TermId t) { return e.first < t; });
    return (it != weights.end() && it->first == id) ? it->second : 0.0;
}

double smoothed_idf(std::size_t n_docs, std::size_t df) {
    return std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(df))) + 1.0;
}

TfidfVectors tfidf_vectorize(std::span<const TokenSeq> window, const TokenSeq& focal) {
    if (window.empty()) throw std::invalid_argument("tfidf_vectorize: empty window");

    std::vector<TokenSeq> docs(window.begin(), window.end());
    docs.push_back(focal);
    TfidfVectors out;
    out.vocab = build_vocabulary(std::span<const TokenSeq>(docs), VocabPolicy::tfidf(), "window+focal");

    std::vector<SparseCounts> counts;
    counts.reserve(docs.size());
    std::vector<std::size_t> df(out.vocab.size(), 0);
    for (const auto& d : docs) {
        counts.push_back(term_counts(d, out.vocab));
        for (const auto& [id, _] : counts.back()) ++df[id];
    }
    out.idf.resize(out.vocab.size());
    for (std::size_t t = 0; t < df.size(); ++t) out.idf[t] = smoothed_idf(docs.size(), df[t]);

    auto to_vector = [&](const SparseCounts& c, std::string context) {
        TermVector v;
        v.context = std::move(context);
        v.weights.reserve(c.size());
        for (const auto& [id, n] : c) v.weights.emplace_back(id, n * out.idf[id]);
        return v;
    };
    for (std::size_t i = 0; i + 1 < docs.size(); ++i) {
        out.window.push_back(to_vector(counts[i], "window"));
    }
    out.focal = to_vector(counts.back(), "focal");
    return out;
}

TfidfVectors tfidf_vectorize(const WorkSet& window, const Work& focal) {
    std::vector<TokenSeq> docs;
    docs.reserve(window.size());
    for (const Work* w : window.works) docs.push_back(tokenize(w->text));
    auto out = tfidf_vectorize(std::span<const TokenSeq>(docs), tokenize(focal.text));
    out.vocab = Vocabulary(out.vocab.terms(), out.vocab.policy(), window.provenance);
    return out;
}

TermVector centroid(std::span<const TermVector> vectors) {
    if (vectors.empty()) throw std::invalid_argument("centroid: empty vector list");
    std::map<TermId, double> sum;
    for (const auto& v : vectors) {
        for (const auto& [id, w] : v.weights) sum[id] += w;
    }
    TermVector c;
    c.context = "centroid of " + std::to_string(vectors.size());
    const double n = static_cast<double>(vectors.size());
    for (const auto& [id, s] : sum) c.weights.emplace_back(id, s / n);
    return c;
}

std::optional<double> term_novelty_score(const TermVector& focal, const TermVector& center) {
    double nf = focal.norm();
    double nc = center.norm();
    if (nf == 0.0 || nc == 0.0) return std::nullopt;
    double dot = 0;
    auto it = center.weights.begin();
    for (const auto& [id, w] : focal.weights) {
        while (it != center.weights.end() && it->first < id) ++it;
        if (it != center.weights.end() && it->first == id) dot += w * it->second;
    }
    return std::clamp(1.0 - dot / (nf * nc), 0.0, 1.0);
}

namespace {

// Running per-term totals over the current window. Integer state only, so
// adding and removing documents is exact.
class WindowAggregate {
public:
    explicit WindowAggregate(std::size_t vocab_size) : cf_(vocab_size, 0), df_(vocab_size, 0) {}

    void add(const SparseCounts& doc) {
        for (const auto& [t, n] : doc) {
            cf_[t] += n;
            ++df_[t];
        }
        ++docs_;
    }
    void remove(const SparseCounts& doc) {
        for (const auto& [t, n] : doc) {
            cf_[t] -= n;
            --df_[t];
        }
        --docs_;
    }

    std::size_t docs() const { return docs_; }
    std::uint64_t cf(TermId t) const { return cf_[t]; }
    std::uint32_t df(TermId t) const { return df_[t]; }
    std::size_t vocab_size() const { return cf_.size(); }

private:
    std::vector<std::uint64_t> cf_;
    std::vector<std::uint32_t> df_;
    std::size_t docs_ = 0;
};

std::optional<double> score_against_window(const WindowAggregate& agg, const SparseCounts& focal,
                                           std::vector<std::uint32_t>& focal_tf, bool include_focal) {
    const std::size_t n_docs = agg.docs() + 1;
    const double members = include_focal ? static_cast<double>(n_docs) : static_cast<double>(agg.docs());
    for (const auto& [t, n] : focal) focal_tf[t] = n;

    double dot = 0, ff = 0, cc = 0;
    const std::size_t v = agg.vocab_size();
    for (TermId t = 0; t < v; ++t) {
        const std::uint64_t cf = agg.cf(t);
        const std::uint32_t tf = focal_tf[t];
        if (cf + tf <= 1) continue;  // absent or hapax over window + focal
        const double idf = smoothed_idf(n_docs, agg.df(t) + (tf > 0 ? 1 : 0));
        const double mass = include_focal ? static_cast<double>(cf + tf) : static_cast<double>(cf);
        const double c = idf * mass / members;
        cc += c * c;
        if (tf > 0) {
            const double f = idf * tf;
            ff += f * f;
            dot += f * c;
        }
    }
    for (const auto& [t, _] : focal) focal_tf[t] = 0;

    if (ff == 0.0 || cc == 0.0) return std::nullopt;
    return std::clamp(1.0 - dot / (std::sqrt(ff) * std::sqrt(cc)), 0.0, 1.0);
}

}  // namespace

std::vector<NoveltyRecord> score_term(const WorkSet& fandom_set, const TermNoveltyOptions& opts) {
    if (opts.span_days <= 0) throw std::invalid_argument("score_term: span_days must be positive");
    const auto& works = fandom_set.works;

    // Fandom-local interning in order of first appearance.
    std::unordered_map<std::string, TermId> ids;
    std::vector<SparseCounts> docs;
    docs.reserve(works.size());
    for (const Work* w : works) {
        std::unordered_map<TermId, std::uint32_t> c;
        for (auto& tok : tokenize(w->text)) {
            auto [it, _] = ids.try_emplace(std::move(tok), static_cast<TermId>(ids.size()));
            ++c[it->second];
        }
        SparseCounts sc(c.begin(), c.end());
        std::sort(sc.begin(), sc.end());
        docs.push_back(std::move(sc));
    }

    WindowAggregate agg(ids.size());
    std::vector<std::uint32_t> focal_tf(ids.size(), 0);
    std::size_t lo = 0, hi = 0;
    std::vector<NoveltyRecord> out;
    out.reserve(works.size());
    for (std::size_t i = 0; i < works.size(); ++i) {
        const Work& focal = *works[i];
        auto [new_lo, new_hi] = window_range(fandom_set, focal.publish_date, opts.span_days);
        for (; hi < new_hi; ++hi) agg.add(docs[hi]);
        for (; lo < new_lo; ++lo) agg.remove(docs[lo]);

        NoveltyRecord rec{focal.id, focal.fandom, focal.publish_date, std::nullopt, std::nullopt,
                          agg.docs()};
        if (agg.docs() >= opts.min_window && agg.docs() > 0) {
            rec.s_term = score_against_window(agg, docs[i], focal_tf, opts.centroid_includes_focal);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<NoveltyRecord> score_fandom_term(const CorpusStore& store, const std::string& fandom,
                                             const TermNoveltyOptions& opts) {
    if (!store.has_fandom(fandom)) throw std::invalid_argument("unknown fandom: " + fandom);
    return score_term(store.fandom_works(fandom), opts);
}

}  // namespace noveltyscope
