#pragma once

#include "noveltyscope/corpus.hpp"
#include "noveltyscope/text.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace noveltyscope {

// Sparse nonnegative weights, sorted by term id.
struct TermVector {
    std::vector<std::pair<TermId, double>> weights;
    std::string context;

    bool is_zero() const;
    double norm() const;
    double at(TermId id) const;
};

struct NoveltyRecord {
    std::string work_id;
    std::string fandom;
    Date publish_date;
    std::optional<double> s_term;   // nullopt: UNSCORED
    std::optional<double> s_topic;  // nullopt: UNSCORED
    std::size_t window_size = 0;
};

// ln((1 + n_docs) / (1 + df)) + 1
double smoothed_idf(std::size_t n_docs, std::size_t df);

struct TfidfVectors {
    Vocabulary vocab;
    std::vector<double> idf;  // indexed by term id
    TermVector focal;
    std::vector<TermVector> window;
};

// Vocabulary (hapax-free) and document frequencies over window + focal; raw tf times smoothed idf.
// Throws std::invalid_argument on an empty window.
TfidfVectors tfidf_vectorize(std::span<const TokenSeq> window, const TokenSeq& focal);
TfidfVectors tfidf_vectorize(const WorkSet& window, const Work& focal);

// Coordinate-wise mean. Throws std::invalid_argument on an empty list.
TermVector centroid(std::span<const TermVector> vectors);

// 1 - cosine(focal, center), clamped to [0, 1]; nullopt if either vector is zero.
std::optional<double> term_novelty_score(const TermVector& focal, const TermVector& center);

struct TermNoveltyOptions {
    int span_days = kDefaultSpanDays;
    std::size_t min_window = 10;
    bool centroid_includes_focal = false;
};

// Scores every work of an ordered single-fandom set against its trailing window
// (window drawn from the same set). Output ordered like the input.
std::vector<NoveltyRecord> score_term(const WorkSet& fandom_set, const TermNoveltyOptions& opts = {});

// Throws std::invalid_argument for a fandom absent from the store.
std::vector<NoveltyRecord> score_fandom_term(const CorpusStore& store, const std::string& fandom,
                                             const TermNoveltyOptions& opts = {});

}  // namespace noveltyscope
