#pragma once

#include "noveltyscope/corpus.hpp"
#include "noveltyscope/term_novelty.hpp"
#include "noveltyscope/text.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace noveltyscope {

using TopicDistribution = std::vector<double>;
using TermIdSeq = std::vector<TermId>;

struct LdaParams {
    std::size_t topics = 100;
    double alpha = 0.01;
    double beta = 0.01;
    int iterations = 50;
    std::uint64_t seed = 1;
};

class TopicModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TopicModel {
public:
    TopicModel() = default;
    TopicModel(LdaParams params, Vocabulary vocab, std::vector<std::uint32_t> word_topic);

    const LdaParams& params() const { return params_; }
    const Vocabulary& vocabulary() const { return vocab_; }
    std::size_t topics() const { return params_.topics; }
    std::size_t vocab_size() const { return vocab_.size(); }

    std::uint32_t count(std::size_t topic, TermId word) const { return word_topic_[word * topics() + topic]; }
    std::uint64_t topic_total(std::size_t topic) const { return topic_totals_[topic]; }
    std::uint64_t total_tokens() const;

    // (n_kw + beta) / (n_k + V beta)
    double phi(std::size_t topic, TermId word) const { return phi_[word * topics() + topic]; }
    const double* phi_row(TermId word) const { return &phi_[word * topics()]; }
    // Running sums of phi_row over topics.
    const double* phi_cumulative_row(TermId word) const { return &phi_cumulative_[word * topics()]; }
    std::vector<double> topic_word_distribution(std::size_t topic) const;

    // Word-major V x K counts.
    const std::vector<std::uint32_t>& word_topic_counts() const { return word_topic_; }

private:
    LdaParams params_;
    Vocabulary vocab_;
    std::vector<std::uint32_t> word_topic_;
    std::vector<std::uint64_t> topic_totals_;
    std::vector<double> phi_;
    std::vector<double> phi_cumulative_;
};

// Collapsed Gibbs sampling over documents already mapped to vocabulary ids.
// Throws TopicModelError on an empty vocabulary or zero topics.
TopicModel fit_lda(std::span<const TermIdSeq> docs, const Vocabulary& vocab, const LdaParams& params);
// Tokenizes, builds the vocabulary under `policy` over `works`, then fits.
TopicModel fit_lda(const WorkSet& works, const LdaParams& params,
                   const VocabPolicy& policy = VocabPolicy::lda());

TermIdSeq to_term_ids(const TokenSeq& tokens, const Vocabulary& vocab);

struct TopicInference {
    TopicDistribution distribution;
    bool unscorable = false;  // no in-vocabulary tokens
};

// Gibbs fold-in with the model's topic-word counts held fixed.
TopicInference infer_topics(const TopicModel& model, const TermIdSeq& doc, int iterations,
                            std::uint64_t seed);
TopicInference infer_topics(const TopicModel& model, const TokenSeq& tokens, int iterations,
                            std::uint64_t seed);

// sum p log2(p / q). Throws std::domain_error when q lacks support where p has mass,
// std::invalid_argument on a length mismatch.
double kl_divergence(std::span<const double> p, std::span<const double> q);

// Jensen-Shannon divergence in bits, clamped to [0, 1]; sqrt of it when `distance` is set.
double topic_novelty_score(std::span<const double> f, std::span<const double> c, bool distance = false);

struct TopicNoveltyOptions {
    int span_days = kDefaultSpanDays;
    std::size_t min_window = 10;
    int inference_iterations = 50;
    std::uint64_t seed = 1;
    bool centroid_includes_focal = false;
    bool js_distance = false;
};

// Per-work inference seed: mixes the run seed with the work id.
std::uint64_t work_seed(std::uint64_t seed, const std::string& work_id);

std::vector<TopicDistribution> infer_work_set(const TopicModel& model, const WorkSet& works,
                                              const TopicNoveltyOptions& opts,
                                              std::vector<bool>* unscorable = nullptr);

std::vector<NoveltyRecord> score_topic(const WorkSet& fandom_set, const TopicModel& model,
                                       const TopicNoveltyOptions& opts = {});
// Throws std::invalid_argument for a fandom absent from the store.
std::vector<NoveltyRecord> score_fandom_topic(const CorpusStore& store, const std::string& fandom,
                                              const TopicModel& model, const TopicNoveltyOptions& opts = {});

// Plain-text checkpoint: hyperparameters, vocabulary, K x V counts.
void save_model(const TopicModel& model, std::ostream& out);
TopicModel load_model(std::istream& in);

}  // namespace noveltyscope
