#include "noveltyscope/synth.hpp"

#include "noveltyscope/text.hpp"
#include "noveltyscope/topic_novelty.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

namespace noveltyscope {

using ordered_json = nlohmann::ordered_json;

std::string_view link_shape_name(LinkShape s) {
    switch (s) {
        case LinkShape::linear_decreasing: return "linear-decreasing";
        case LinkShape::u_shape: return "u-shape";
        case LinkShape::decreasing_with_uptick: return "decreasing-with-uptick";
    }
    return "?";
}

std::optional<LinkShape> parse_link_shape(std::string_view name) {
    for (auto s : {LinkShape::linear_decreasing, LinkShape::u_shape, LinkShape::decreasing_with_uptick}) {
        if (link_shape_name(s) == name) return s;
    }
    return std::nullopt;
}

double ReceptionLink::log_mean(double s_term, double s_topic, bool frequent_rel, double n_chapters) const {
    double m = intercept + term_slope * s_term + topic_slope * s_topic;
    if (shape == LinkShape::u_shape) m += topic_curvature * (s_topic - topic_center) * (s_topic - topic_center);
    if (shape == LinkShape::decreasing_with_uptick) {
        double excess = std::max(0.0, s_term - uptick_start);
        m += uptick_gain * excess * excess;
    }
    if (frequent_rel) m += frequent_relationship;
    m += chapters * n_chapters;
    return m;
}

double ReceptionLink::nonzero_probability(double s_term, double s_topic, double n_chapters) const {
    double eta = zero_intercept + zero_term * s_term + zero_topic * s_topic + zero_chapters * n_chapters;
    return 1.0 / (1.0 + std::exp(-eta));
}

void SynthConfig::validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument("synth config: " + m); };
    if (n_fandoms == 0 || works_per_fandom == 0) fail("needs at least one fandom and one work");
    if (topics == 0 || words_per_topic == 0) fail("needs at least one topic with one word");
    if (!(topic_purity > 0 && topic_purity <= 1)) fail("topic_purity must be in (0, 1]");
    if (topic_purity < 1 && common_words == 0) fail("topic_purity < 1 needs common words");
    if (doc_mix_max < 0 || doc_mix_max > 1) fail("doc_mix_max must be in [0, 1]");
    if (min_length == 0 || min_length > max_length) fail("invalid document length range");
    if (outlier_rate < 0 || outlier_rate > 1) fail("outlier_rate must be in [0, 1]");
    if (span_days <= 0 || novelty_window_days <= 0) fail("spans must be positive");
    if (authors_per_fandom == 0 || relationships_per_fandom == 0) fail("needs authors and relationships");
    if (common_words + topics * words_per_topic <= lda_top_removal) {
        fail("fandom vocabulary (" + std::to_string(common_words + topics * words_per_topic) +
             ") not larger than the top-" + std::to_string(lda_top_removal) + " removal");
    }
}

std::string pseudo_word(std::size_t index) {
    static constexpr std::string_view kCons = "bcdfghjklmnprstvz";
    static constexpr std::string_view kVow = "aeiou";
    constexpr std::size_t base = kCons.size() * kVow.size();
    std::size_t x = index + base;  // at least two syllables
    std::string out;
    while (x > 0) {
        std::size_t s = x % base;
        out.insert(out.begin(), kVow[s % kVow.size()]);
        out.insert(out.begin(), kCons[s / kVow.size()]);
        x /= base;
    }
    return out;
}

namespace {

std::size_t sample_discrete(const std::vector<double>& cumulative, Rng& rng) {
    double u = uniform01(rng) * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
}

std::vector<double> cumulative_of(const std::vector<double>& w) {
    std::vector<double> c(w.size());
    std::partial_sum(w.begin(), w.end(), c.begin());
    return c;
}

std::vector<double> dirichlet(std::size_t n, double conc, Rng& rng) {
    std::gamma_distribution<double> g(conc, 1.0);
    std::vector<double> v(n);
    double s = 0;
    for (auto& x : v) s += (x = g(rng));
    if (s <= 0) {
        std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(n));
        return v;
    }
    for (auto& x : v) x /= s;
    return v;
}

std::vector<double> zipf_weights(std::size_t n, double exponent) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 / std::pow(static_cast<double>(i + 1), exponent);
    return w;
}

const std::vector<std::string> kRatings{"General Audiences", "Teen And Up Audiences", "Mature", "Explicit",
                                        "Not Rated"};
const std::vector<double> kRatingWeights{0.35, 0.30, 0.15, 0.12, 0.08};
const std::vector<std::string> kCategories{"Gen", "M/M", "F/M", "F/F", "Multi", "Other"};
const std::vector<double> kCategoryWeights{0.30, 0.30, 0.20, 0.08, 0.07, 0.05};
const std::vector<std::string> kWarnings{"No Archive Warnings Apply", "Creator Chose Not To Use Archive Warnings",
                                         "Graphic Depictions Of Violence", "Major Character Death"};
const std::vector<double> kWarningWeights{0.55, 0.30, 0.10, 0.05};

template <typename T>
const T& pick(const std::vector<T>& items, const std::vector<double>& cumulative, Rng& rng) {
    return items[sample_discrete(cumulative, rng)];
}

// Top five relationships by count within one fandom; ties broken lexicographically.
std::set<std::string> top_relationships(const std::vector<Work*>& works) {
    std::map<std::string, std::size_t> count;
    for (const Work* w : works)
        for (const auto& r : w->relationships) ++count[r];
    std::vector<std::pair<std::string, std::size_t>> ranked(count.begin(), count.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::set<std::string> top;
    for (std::size_t i = 0; i < ranked.size() && i < 5; ++i) top.insert(ranked[i].first);
    return top;
}

}  // namespace

std::uint64_t draw_count(double log_mean, double noise_sd, double p_nonzero, std::uint32_t chapters, Rng& rng) {
    if (uniform01(rng) >= p_nonzero) return 0;
    std::normal_distribution<double> normal(0.0, 1.0);
    double per_chapter = std::exp(log_mean + noise_sd * normal(rng));
    auto count = static_cast<long long>(std::llround(per_chapter * chapters));
    return static_cast<std::uint64_t>(std::max(1LL, count));
}

SynthCorpus generate(const SynthConfig& cfg) {
    cfg.validate();
    SynthCorpus out;
    const std::size_t k_count = cfg.topics;
    const std::size_t v = cfg.common_words + k_count * cfg.words_per_topic;

    const auto rating_cum = cumulative_of(kRatingWeights);
    const auto category_cum = cumulative_of(kCategoryWeights);
    const auto warning_cum = cumulative_of(kWarningWeights);
    const auto topic_pop_cum = cumulative_of(zipf_weights(k_count, cfg.topic_popularity_decay));
    const auto common_weights = zipf_weights(cfg.common_words, 1.0);
    const double common_total = std::accumulate(common_weights.begin(), common_weights.end(), 0.0);

    for (std::size_t f = 0; f < cfg.n_fandoms; ++f) {
        Rng rng(derive_seed(cfg.seed, f));
        const std::string fandom = "Fandom " + std::to_string(f + 1);

        std::vector<std::string> vocab(v);
        for (std::size_t j = 0; j < cfg.common_words; ++j) vocab[j] = pseudo_word(j);
        for (std::size_t j = cfg.common_words; j < v; ++j) {
            vocab[j] = pseudo_word(cfg.common_words + f * k_count * cfg.words_per_topic + (j - cfg.common_words));
        }

        std::vector<std::vector<double>> phi(k_count, std::vector<double>(v, 0.0));
        std::vector<std::vector<double>> phi_cum(k_count);
        for (std::size_t k = 0; k < k_count; ++k) {
            auto own = dirichlet(cfg.words_per_topic, 1.0, rng);
            for (std::size_t j = 0; j < cfg.words_per_topic; ++j) {
                phi[k][cfg.common_words + k * cfg.words_per_topic + j] = cfg.topic_purity * own[j];
            }
            for (std::size_t j = 0; j < cfg.common_words; ++j) {
                phi[k][j] = (1.0 - cfg.topic_purity) * common_weights[j] / common_total;
            }
            phi_cum[k] = cumulative_of(phi[k]);
        }

        std::vector<std::string> authors(cfg.authors_per_fandom);
        for (std::size_t a = 0; a < authors.size(); ++a) {
            authors[a] = "author-" + std::to_string(f + 1) + "-" + std::to_string(a + 1);
        }
        const auto author_cum = cumulative_of(zipf_weights(authors.size(), 0.8));
        std::vector<std::string> rels(cfg.relationships_per_fandom);
        for (std::size_t r = 0; r < rels.size(); ++r) {
            rels[r] = "Character " + std::to_string(2 * r + 1) + "/Character " + std::to_string(2 * r + 2) +
                      " (" + fandom + ")";
        }
        const auto rel_cum = cumulative_of(zipf_weights(rels.size(), 1.0));

        std::vector<Work> works(cfg.works_per_fandom);
        std::vector<GroundTruth> truth(cfg.works_per_fandom);
        for (std::size_t i = 0; i < works.size(); ++i) {
            Work& w = works[i];
            GroundTruth& t = truth[i];
            char id[64];
            std::snprintf(id, sizeof id, "f%02zu-w%06zu", f + 1, i + 1);
            w.id = t.id = id;
            w.fandom = t.fandom = fandom;
            w.author = pick(authors, author_cum, rng);
            w.title = "Work " + std::to_string(i + 1);
            w.publish_date = cfg.start_date.plus_days(static_cast<long long>(uniform_index(rng, cfg.span_days)));
            w.update_date = w.publish_date.plus_days(static_cast<long long>(uniform_index(rng, 61)));
            w.chapters = uniform01(rng) < 0.6 ? 1u : 2u + static_cast<std::uint32_t>(uniform_index(rng, 9));
            w.rating = pick(kRatings, rating_cum, rng);
            w.category = pick(kCategories, category_cum, rng);
            w.archive_warnings = {pick(kWarnings, warning_cum, rng)};
            if (uniform01(rng) < 0.1) {
                auto extra = pick(kWarnings, warning_cum, rng);
                if (extra != w.archive_warnings[0]) w.archive_warnings.push_back(extra);
                std::sort(w.archive_warnings.begin(), w.archive_warnings.end());
            }
            w.relationships = {pick(rels, rel_cum, rng)};
            if (uniform01(rng) < 0.3) {
                auto extra = pick(rels, rel_cum, rng);
                if (extra != w.relationships[0]) w.relationships.push_back(extra);
            }

            const std::size_t length =
                cfg.min_length + static_cast<std::size_t>(uniform_index(rng, cfg.max_length - cfg.min_length + 1));
            std::string text;
            text.reserve(length * 8);
            if (uniform01(rng) < cfg.outlier_rate) {
                // One short sentence of words found nowhere else, repeated.
                std::string sentence;
                for (std::size_t j = 0; j < 3; ++j) {
                    sentence += (j ? " " : "") + pseudo_word(10'000'000 + (f * cfg.works_per_fandom + i) * 3 + j);
                }
                t.main_topic = k_count;
                t.theta.assign(k_count, 1.0 / static_cast<double>(k_count));
                for (std::size_t n = 0; n < length; n += 3) {
                    text += sentence;
                    text += n + 3 < length ? ". " : ".";
                }
                // Trim to the exact length.
                auto toks = tokenize(text);
                toks.resize(std::min(toks.size(), length));
                text.clear();
                for (std::size_t n = 0; n < toks.size(); ++n) text += (n ? " " : "") + toks[n];
            } else {
                t.main_topic = sample_discrete(topic_pop_cum, rng);
                const double mix = uniform01(rng) * cfg.doc_mix_max;
                auto spread = dirichlet(k_count, 1.0, rng);
                t.theta.resize(k_count);
                for (std::size_t k = 0; k < k_count; ++k) {
                    t.theta[k] = mix * spread[k] + (k == t.main_topic ? 1.0 - mix : 0.0);
                }
                const auto theta_cum = cumulative_of(t.theta);
                for (std::size_t n = 0; n < length; ++n) {
                    std::size_t k = sample_discrete(theta_cum, rng);
                    if (n) text.push_back(' ');
                    text += vocab[sample_discrete(phi_cum[k], rng)];
                }
            }
            w.text = std::move(text);
            w.word_count = count_tokens(w.text);
        }

        std::vector<std::size_t> order(works.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (works[a].publish_date != works[b].publish_date) return works[a].publish_date < works[b].publish_date;
            return works[a].id < works[b].id;
        });
        std::vector<Work> sorted_works;
        std::vector<GroundTruth> sorted_truth;
        for (auto idx : order) {
            sorted_works.push_back(std::move(works[idx]));
            sorted_truth.push_back(std::move(truth[idx]));
        }

        WorkSet set;
        set.provenance = fandom;
        std::vector<Work*> ptrs;
        for (auto& w : sorted_works) {
            set.works.push_back(&w);
            ptrs.push_back(&w);
        }
        TermNoveltyOptions topts;
        topts.span_days = cfg.novelty_window_days;
        topts.min_window = cfg.novelty_min_window;
        auto term_scores = score_term(set, topts);

        // Topic truth: JS divergence of planted mixtures against the trailing-window mean.
        for (std::size_t i = 0; i < sorted_works.size(); ++i) {
            sorted_truth[i].novelty_term = term_scores[i].s_term;
            auto [lo, hi] = window_range(set, sorted_works[i].publish_date, cfg.novelty_window_days);
            if (hi - lo < cfg.novelty_min_window || hi == lo) continue;
            std::vector<double> center(k_count, 0.0);
            for (std::size_t j = lo; j < hi; ++j)
                for (std::size_t k = 0; k < k_count; ++k) center[k] += sorted_truth[j].theta[k];
            for (auto& c : center) c /= static_cast<double>(hi - lo);
            sorted_truth[i].novelty_topic = topic_novelty_score(sorted_truth[i].theta, center);
        }

        double mean_term = 0, mean_topic = 0;
        std::size_t n_scored = 0;
        for (const auto& t : sorted_truth) {
            if (t.novelty_term && t.novelty_topic) {
                mean_term += *t.novelty_term;
                mean_topic += *t.novelty_topic;
                ++n_scored;
            }
        }
        if (n_scored) {
            mean_term /= static_cast<double>(n_scored);
            mean_topic /= static_cast<double>(n_scored);
        }

        const auto top_rel = top_relationships(ptrs);
        Rng reception_rng(derive_seed(cfg.seed, 1000 + f));
        for (std::size_t i = 0; i < sorted_works.size(); ++i) {
            Work& w = sorted_works[i];
            GroundTruth& t = sorted_truth[i];
            t.frequent_relationship = std::any_of(w.relationships.begin(), w.relationships.end(),
                                                  [&](const std::string& r) { return top_rel.contains(r); });
            const double st = t.novelty_term.value_or(mean_term);
            const double sp = t.novelty_topic.value_or(mean_topic);
            std::array<std::uint64_t, 4> counts{};
            for (std::size_t r = 0; r < 4; ++r) {
                const auto& link = cfg.links[r];
                t.log_mean[r] = link.log_mean(st, sp, t.frequent_relationship, w.chapters);
                t.nonzero_probability[r] = link.nonzero_probability(st, sp, w.chapters);
                counts[r] = draw_count(t.log_mean[r], link.noise_sd, t.nonzero_probability[r], w.chapters,
                                       reception_rng);
            }
            w.kudos = counts[0];
            w.hits = counts[1];
            w.comments = counts[2];
            w.bookmarks = counts[3];
        }

        for (auto& w : sorted_works) out.works.push_back(std::move(w));
        for (auto& t : sorted_truth) out.truth.push_back(std::move(t));
        out.topic_word.push_back(std::move(phi));
        out.vocabulary.push_back(std::move(vocab));
    }
    return out;
}

void write_corpus(const SynthCorpus& corpus, std::ostream& out) {
    for (const auto& w : corpus.works) out << serialize_work(w) << '\n';
}

namespace {
ordered_json link_json(const ReceptionLink& l) {
    ordered_json j;
    j["shape"] = link_shape_name(l.shape);
    j["intercept"] = l.intercept;
    j["term_slope"] = l.term_slope;
    j["topic_slope"] = l.topic_slope;
    j["topic_curvature"] = l.topic_curvature;
    j["topic_center"] = l.topic_center;
    j["uptick_start"] = l.uptick_start;
    j["uptick_gain"] = l.uptick_gain;
    j["frequent_relationship"] = l.frequent_relationship;
    j["chapters"] = l.chapters;
    j["noise_sd"] = l.noise_sd;
    j["zero_intercept"] = l.zero_intercept;
    j["zero_term"] = l.zero_term;
    j["zero_topic"] = l.zero_topic;
    j["zero_chapters"] = l.zero_chapters;
    return j;
}
}  // namespace

void write_ground_truth(const SynthCorpus& corpus, const SynthConfig& cfg, std::ostream& out) {
    ordered_json header;
    ordered_json c;
    c["seed"] = cfg.seed;
    c["n_fandoms"] = cfg.n_fandoms;
    c["works_per_fandom"] = cfg.works_per_fandom;
    c["topics"] = cfg.topics;
    c["words_per_topic"] = cfg.words_per_topic;
    c["common_words"] = cfg.common_words;
    c["topic_purity"] = cfg.topic_purity;
    c["novelty_window_days"] = cfg.novelty_window_days;
    c["novelty_min_window"] = cfg.novelty_min_window;
    header["config"] = c;
    ordered_json links;
    for (std::size_t r = 0; r < 4; ++r) links[std::string(response_name(kResponses[r]))] = link_json(cfg.links[r]);
    header["link"] = links;
    out << header.dump() << '\n';

    for (const auto& t : corpus.truth) {
        ordered_json j;
        j["id"] = t.id;
        j["fandom"] = t.fandom;
        j["true_novelty_term"] = t.novelty_term ? ordered_json(*t.novelty_term) : ordered_json(nullptr);
        j["true_novelty_topic"] = t.novelty_topic ? ordered_json(*t.novelty_topic) : ordered_json(nullptr);
        j["true_topic"] = t.main_topic;
        j["theta"] = t.theta;
        j["frequent_relationship"] = t.frequent_relationship;
        ordered_json lm, pz;
        for (std::size_t r = 0; r < 4; ++r) {
            lm[std::string(response_name(kResponses[r]))] = t.log_mean[r];
            pz[std::string(response_name(kResponses[r]))] = t.nonzero_probability[r];
        }
        j["log_mean"] = lm;
        j["nonzero_probability"] = pz;
        out << j.dump() << '\n';
    }
}

PlantedTopics planted_topic_docs(std::size_t topics, std::size_t vocab_size, std::size_t docs,
                                 std::size_t doc_length, double purity, double mix_max, std::uint64_t seed) {
    if (topics == 0 || vocab_size < topics) throw std::invalid_argument("planted_topic_docs: need vocab >= topics");
    Rng rng(seed);
    PlantedTopics out;
    out.vocabulary.resize(vocab_size);
    for (std::size_t j = 0; j < vocab_size; ++j) out.vocabulary[j] = pseudo_word(j);
    const std::size_t block = vocab_size / topics;
    std::gamma_distribution<double> g(5.0, 1.0);
    std::vector<std::vector<double>> cums;
    for (std::size_t k = 0; k < topics; ++k) {
        std::vector<double> phi(vocab_size, 0.0);
        const std::size_t begin = k * block;
        const std::size_t end = k + 1 == topics ? vocab_size : begin + block;
        double own = 0;
        for (std::size_t j = begin; j < end; ++j) own += (phi[j] = g(rng));
        for (std::size_t j = begin; j < end; ++j) phi[j] *= purity / own;
        const double rest = (1.0 - purity) / static_cast<double>(vocab_size - (end - begin));
        for (std::size_t j = 0; j < vocab_size; ++j)
            if (j < begin || j >= end) phi[j] = rest;
        cums.push_back(cumulative_of(phi));
        out.topic_word.push_back(std::move(phi));
    }
    for (std::size_t d = 0; d < docs; ++d) {
        std::size_t z = uniform_index(rng, topics);
        double mix = uniform01(rng) * mix_max;
        auto spread = dirichlet(topics, 1.0, rng);
        std::vector<double> theta(topics);
        for (std::size_t k = 0; k < topics; ++k) theta[k] = mix * spread[k] + (k == z ? 1.0 - mix : 0.0);
        auto tc = cumulative_of(theta);
        std::vector<std::uint32_t> doc(doc_length);
        for (auto& w : doc) w = static_cast<std::uint32_t>(sample_discrete(cums[sample_discrete(tc, rng)], rng));
        out.docs.push_back(std::move(doc));
        out.main_topic.push_back(z);
    }
    return out;
}

std::vector<NoveltyRecord> oracle_scores(const std::vector<const Work*>& corpus, int span_days, std::size_t min_window,
                                         const std::map<std::string, std::vector<double>>& topic_dists,
                                         const std::set<std::string>& topic_unscorable) {
    if (corpus.size() > kOracleMaxWorks) {
        throw OracleError("oracle_scores: corpus of " + std::to_string(corpus.size()) + " works exceeds " +
                          std::to_string(kOracleMaxWorks));
    }
    std::vector<TokenSeq> tokens;
    tokens.reserve(corpus.size());
    for (const Work* w : corpus) tokens.push_back(tokenize(w->text));

    std::vector<NoveltyRecord> out;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Work& focal = *corpus[i];
        const long long focal_day = focal.publish_date.serial();
        std::vector<std::size_t> window;
        for (std::size_t j = 0; j < corpus.size(); ++j) {
            const Work& o = *corpus[j];
            const long long day = o.publish_date.serial();
            if (j != i && o.id != focal.id && o.fandom == focal.fandom && day < focal_day &&
                day >= focal_day - span_days) {
                window.push_back(j);
            }
        }
        NoveltyRecord rec{focal.id, focal.fandom, focal.publish_date, std::nullopt, std::nullopt, window.size()};
        if (window.empty() || window.size() < min_window) {
            out.push_back(rec);
            continue;
        }

        // Term: dense document-term matrix over window + focal (focal last).
        std::vector<std::size_t> docs = window;
        docs.push_back(i);
        std::map<std::string, long> freq;
        for (auto d : docs)
            for (const auto& t : tokens[d]) ++freq[t];
        std::map<std::string, std::size_t> column;
        for (const auto& [t, n] : freq)
            if (n >= 2) column.emplace(t, column.size());
        const std::size_t rows = docs.size(), cols = column.size();
        std::vector<std::vector<double>> m(rows, std::vector<double>(cols, 0.0));
        for (std::size_t r = 0; r < rows; ++r)
            for (const auto& t : tokens[docs[r]]) {
                auto it = column.find(t);
                if (it != column.end()) m[r][it->second] += 1.0;
            }
        for (std::size_t c = 0; c < cols; ++c) {
            double df = 0;
            for (std::size_t r = 0; r < rows; ++r)
                if (m[r][c] > 0) df += 1;
            const double idf = std::log((1.0 + rows) / (1.0 + df)) + 1.0;
            for (std::size_t r = 0; r < rows; ++r) m[r][c] *= idf;
        }
        double dot = 0, ff = 0, cc = 0;
        for (std::size_t c = 0; c < cols; ++c) {
            double center = 0;
            for (std::size_t r = 0; r + 1 < rows; ++r) center += m[r][c];
            center /= static_cast<double>(rows - 1);
            const double f = m[rows - 1][c];
            dot += f * center;
            ff += f * f;
            cc += center * center;
        }
        if (ff > 0 && cc > 0) rec.s_term = std::min(1.0, std::max(0.0, 1.0 - dot / std::sqrt(ff * cc)));

        // Topic: mean of window distributions, then the two KL halves with natural logs.
        auto fit = topic_dists.find(focal.id);
        if (fit != topic_dists.end() && !topic_unscorable.contains(focal.id)) {
            const auto& f = fit->second;
            std::vector<double> center(f.size(), 0.0);
            bool complete = true;
            for (auto j : window) {
                auto it = topic_dists.find(corpus[j]->id);
                if (it == topic_dists.end()) {
                    complete = false;
                    break;
                }
                for (std::size_t k = 0; k < f.size(); ++k) center[k] += it->second[k];
            }
            if (complete) {
                double js = 0;
                for (std::size_t k = 0; k < f.size(); ++k) {
                    const double c = center[k] / static_cast<double>(window.size());
                    const double mid = 0.5 * (f[k] + c);
                    if (c > 0) js += 0.5 * c * std::log(c / mid);
                    if (f[k] > 0) js += 0.5 * f[k] * std::log(f[k] / mid);
                }
                rec.s_topic = std::min(1.0, std::max(0.0, js / std::log(2.0)));
            }
        }
        out.push_back(rec);
    }
    return out;
}

}  // namespace noveltyscope
