#pragma once

#include "noveltyscope/corpus.hpp"
#include "noveltyscope/random.hpp"
#include "noveltyscope/term_novelty.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace noveltyscope {

enum class LinkShape { linear_decreasing, u_shape, decreasing_with_uptick };

std::string_view link_shape_name(LinkShape s);
std::optional<LinkShape> parse_link_shape(std::string_view name);

// ln-scale per-chapter mean of one response as a function of the true novelty
// scores and controls, plus the logit of a nonzero outcome.
struct ReceptionLink {
    LinkShape shape = LinkShape::linear_decreasing;
    double intercept = 5.0;
    double term_slope = -5.0;
    double topic_slope = 0.0;
    // u_shape: + topic_curvature * (s_topic - topic_center)^2
    double topic_curvature = 0.0;
    double topic_center = 0.0;
    // decreasing_with_uptick: + uptick_gain * max(0, s_term - uptick_start)^2
    double uptick_start = 0.85;
    double uptick_gain = 0.0;
    double frequent_relationship = 0.0;
    double chapters = 0.0;
    double noise_sd = 0.5;
    // logit P(nonzero) = zero_intercept + zero_term * s_term + zero_topic * s_topic + zero_chapters * chapters
    double zero_intercept = 2.0;
    double zero_term = 0.0;
    double zero_topic = 0.0;
    double zero_chapters = 0.0;

    double log_mean(double s_term, double s_topic, bool frequent_rel, double n_chapters) const;
    double nonzero_probability(double s_term, double s_topic, double n_chapters) const;
};

struct SynthConfig {
    std::size_t n_fandoms = 3;
    std::size_t works_per_fandom = 400;
    std::size_t topics = 8;             // planted topics per fandom
    std::size_t words_per_topic = 120;  // topic-specific vocabulary
    std::size_t common_words = 400;     // shared pool present in every topic
    double topic_purity = 0.8;          // mass of a topic on its own words
    double topic_popularity_decay = 0.6;  // Zipf exponent over topic popularity
    double doc_mix_max = 0.4;           // max share of a document outside its main topic
    std::size_t min_length = 550;
    std::size_t max_length = 1400;
    double outlier_rate = 0.01;         // repeated-sentence works
    Date start_date = Date(2012, 1, 1);
    int span_days = 1460;
    std::size_t authors_per_fandom = 150;
    std::size_t relationships_per_fandom = 12;
    std::size_t lda_top_removal = 500;  // infeasible if the fandom vocabulary is not larger
    int novelty_window_days = kDefaultSpanDays;
    std::size_t novelty_min_window = 10;
    std::array<ReceptionLink, 4> links{};  // kudos, hits, comments, bookmarks
    std::uint64_t seed = 1;

    void validate() const;  // throws std::invalid_argument
};

struct GroundTruth {
    std::string id;
    std::string fandom;
    std::optional<double> novelty_term;
    std::optional<double> novelty_topic;
    std::size_t main_topic = 0;
    std::vector<double> theta;
    bool frequent_relationship = false;
    std::array<double, 4> log_mean{};
    std::array<double, 4> nonzero_probability{};
};

struct SynthCorpus {
    std::vector<Work> works;  // ordered by fandom, then (publish_date, id)
    std::vector<GroundTruth> truth;  // parallel to works
    std::vector<std::vector<std::vector<double>>> topic_word;  // [fandom][topic][word]
    std::vector<std::vector<std::string>> vocabulary;           // [fandom][word]
};

SynthCorpus generate(const SynthConfig& config);

void write_corpus(const SynthCorpus& corpus, std::ostream& out);
void write_ground_truth(const SynthCorpus& corpus, const SynthConfig& config, std::ostream& out);

std::string pseudo_word(std::size_t index);

// Draws one response count given the log mean, chapters and the nonzero probability.
std::uint64_t draw_count(double log_mean, double noise_sd, double p_nonzero, std::uint32_t chapters, Rng& rng);

// Planted-topic documents as vocabulary ids, for topic-model recovery checks.
struct PlantedTopics {
    std::vector<std::vector<double>> topic_word;  // K x V
    std::vector<std::vector<std::uint32_t>> docs;
    std::vector<std::size_t> main_topic;
    std::vector<std::string> vocabulary;
};
PlantedTopics planted_topic_docs(std::size_t topics, std::size_t vocab_size, std::size_t docs,
                                 std::size_t doc_length, double purity, double mix_max, std::uint64_t seed);

// Independent dense recomputation of both novelty scores. Topic scores use the supplied
// per-work distributions (keyed by work id); works without one get no topic score.
// Works in `topic_unscorable` keep their distribution in peers' windows but are not scored.
class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
inline constexpr std::size_t kOracleMaxWorks = 5000;
std::vector<NoveltyRecord> oracle_scores(const std::vector<const Work*>& corpus, int span_days,
                                         std::size_t min_window,
                                         const std::map<std::string, std::vector<double>>& topic_dists = {},
                                         const std::set<std::string>& topic_unscorable = {});

}  // namespace noveltyscope
