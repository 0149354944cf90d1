#include "noveltyscope/topic_novelty.hpp"

#include "noveltyscope/random.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace noveltyscope {

TopicModel::TopicModel(LdaParams params, Vocabulary vocab, std::vector<std::uint32_t> word_topic)
    : params_(params), vocab_(std::move(vocab)), word_topic_(std::move(word_topic)) {
    const std::size_t k_count = params_.topics;
    const std::size_t v = vocab_.size();
    if (word_topic_.size() != k_count * v) throw TopicModelError("topic-word count matrix has wrong shape");
    topic_totals_.assign(k_count, 0);
    for (std::size_t w = 0; w < v; ++w) {
        for (std::size_t k = 0; k < k_count; ++k) topic_totals_[k] += word_topic_[w * k_count + k];
    }
    phi_.resize(word_topic_.size());
    phi_cumulative_.resize(word_topic_.size());
    const double vbeta = static_cast<double>(v) * params_.beta;
    for (std::size_t w = 0; w < v; ++w) {
        double running = 0;
        for (std::size_t k = 0; k < k_count; ++k) {
            phi_[w * k_count + k] =
                (word_topic_[w * k_count + k] + params_.beta) / (static_cast<double>(topic_totals_[k]) + vbeta);
            running += phi_[w * k_count + k];
            phi_cumulative_[w * k_count + k] = running;
        }
    }
}

std::uint64_t TopicModel::total_tokens() const {
    return std::accumulate(topic_totals_.begin(), topic_totals_.end(), std::uint64_t{0});
}

std::vector<double> TopicModel::topic_word_distribution(std::size_t topic) const {
    std::vector<double> out(vocab_size());
    for (TermId w = 0; w < out.size(); ++w) out[w] = phi(topic, w);
    return out;
}

namespace {

// Set of topics with a nonzero count, with O(1) insert and erase.
class TopicSet {
public:
    explicit TopicSet(std::size_t k_count) : pos_(k_count, kAbsent) {}
    void insert(std::uint32_t k) {
        if (pos_[k] != kAbsent) return;
        pos_[k] = static_cast<std::uint32_t>(items_.size());
        items_.push_back(k);
    }
    void erase(std::uint32_t k) {
        const std::uint32_t p = pos_[k];
        if (p == kAbsent) return;
        const std::uint32_t last = items_.back();
        items_[p] = last;
        pos_[last] = p;
        items_.pop_back();
        pos_[k] = kAbsent;
    }
    void clear() {
        for (auto k : items_) pos_[k] = kAbsent;
        items_.clear();
    }
    const std::vector<std::uint32_t>& items() const { return items_; }

private:
    static constexpr std::uint32_t kAbsent = 0xffffffffu;
    std::vector<std::uint32_t> pos_;
    std::vector<std::uint32_t> items_;
};

}  // namespace

// Collapsed Gibbs with the conditional split into three buckets (Yao et al. 2009):
//   (n_dk + a)(n_kw + b)/(n_k + Vb) = a b/(n_k + Vb) + n_dk b/(n_k + Vb) + (n_dk + a) n_kw/(n_k + Vb)
// The second bucket runs over the document's topics, the third over the word's.
TopicModel fit_lda(std::span<const TermIdSeq> docs, const Vocabulary& vocab, const LdaParams& params) {
    if (params.topics < 1) throw TopicModelError("fit_lda: number of topics must be >= 1");
    if (vocab.empty()) throw TopicModelError("fit_lda: empty vocabulary");
    if (params.iterations < 0) throw TopicModelError("fit_lda: negative iteration count");

    const std::size_t k_count = params.topics;
    const std::size_t v = vocab.size();
    const double alpha = params.alpha, beta = params.beta;
    const double vbeta = static_cast<double>(v) * beta;

    Rng rng(params.seed);
    std::vector<std::uint32_t> nwk(v * k_count, 0);
    std::vector<std::uint64_t> nk(k_count, 0);
    std::vector<std::vector<std::uint32_t>> z(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        z[d].resize(docs[d].size());
        for (std::size_t i = 0; i < docs[d].size(); ++i) {
            auto k = static_cast<std::uint32_t>(uniform_index(rng, k_count));
            z[d][i] = k;
            ++nwk[docs[d][i] * k_count + k];
            ++nk[k];
        }
    }
    std::vector<TopicSet> word_topics(v, TopicSet(k_count));
    for (std::size_t w = 0; w < v; ++w)
        for (std::size_t k = 0; k < k_count; ++k)
            if (nwk[w * k_count + k]) word_topics[w].insert(static_cast<std::uint32_t>(k));

    std::vector<double> inv(k_count);
    for (std::size_t k = 0; k < k_count; ++k) inv[k] = 1.0 / (static_cast<double>(nk[k]) + vbeta);

    std::vector<std::uint32_t> ndk(k_count, 0);
    TopicSet doc_topics(k_count);
    std::vector<double> q_mass(k_count);
    for (int it = 0; it < params.iterations; ++it) {
        for (std::size_t d = 0; d < docs.size(); ++d) {
            const auto& doc = docs[d];
            auto& zd = z[d];
            for (auto k : doc_topics.items()) ndk[k] = 0;
            doc_topics.clear();
            for (auto k : zd) {
                ++ndk[k];
                doc_topics.insert(k);
            }
            double s_total = 0;
            for (std::size_t k = 0; k < k_count; ++k) s_total += inv[k];
            s_total *= alpha * beta;

            for (std::size_t i = 0; i < doc.size(); ++i) {
                const TermId w = doc[i];
                std::uint32_t k = zd[i];
                std::uint32_t* row = &nwk[static_cast<std::size_t>(w) * k_count];
                auto& wt = word_topics[w];

                s_total -= alpha * beta * inv[k];
                if (--ndk[k] == 0) doc_topics.erase(k);
                if (--row[k] == 0) wt.erase(k);
                --nk[k];
                inv[k] = 1.0 / (static_cast<double>(nk[k]) + vbeta);
                s_total += alpha * beta * inv[k];

                double r_total = 0;
                for (auto t : doc_topics.items()) r_total += ndk[t] * inv[t];
                r_total *= beta;
                double q_total = 0;
                const auto& wl = wt.items();
                for (std::size_t j = 0; j < wl.size(); ++j) {
                    const auto t = wl[j];
                    q_mass[j] = (ndk[t] + alpha) * row[t] * inv[t];
                    q_total += q_mass[j];
                }

                double u = uniform01(rng) * (s_total + r_total + q_total);
                if (u < q_total) {
                    k = wl.back();
                    for (std::size_t j = 0; j < wl.size(); ++j) {
                        u -= q_mass[j];
                        if (u < 0) {
                            k = wl[j];
                            break;
                        }
                    }
                } else if ((u -= q_total) < r_total) {
                    const auto& dl = doc_topics.items();
                    k = dl.back();
                    for (auto t : dl) {
                        u -= beta * ndk[t] * inv[t];
                        if (u < 0) {
                            k = t;
                            break;
                        }
                    }
                } else {
                    u -= r_total;
                    k = static_cast<std::uint32_t>(k_count - 1);
                    for (std::size_t t = 0; t < k_count; ++t) {
                        u -= alpha * beta * inv[t];
                        if (u < 0) {
                            k = static_cast<std::uint32_t>(t);
                            break;
                        }
                    }
                }

                zd[i] = k;
                s_total -= alpha * beta * inv[k];
                if (ndk[k]++ == 0) doc_topics.insert(k);
                if (row[k]++ == 0) wt.insert(k);
                ++nk[k];
                inv[k] = 1.0 / (static_cast<double>(nk[k]) + vbeta);
                s_total += alpha * beta * inv[k];
            }
        }
    }
    return TopicModel(params, vocab, std::move(nwk));
}

TermIdSeq to_term_ids(const TokenSeq& tokens, const Vocabulary& vocab) {
    TermIdSeq out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (auto id = vocab.id(t)) out.push_back(*id);
    }
    return out;
}

TopicModel fit_lda(const WorkSet& works, const LdaParams& params, const VocabPolicy& policy) {
    if (works.empty()) throw TopicModelError("fit_lda: empty work set");
    std::vector<TokenSeq> tokens;
    tokens.reserve(works.size());
    for (const Work* w : works.works) tokens.push_back(tokenize(w->text));
    Vocabulary vocab = build_vocabulary(std::span<const TokenSeq>(tokens), policy, works.provenance);
    if (vocab.empty()) throw TopicModelError("fit_lda: vocabulary empty after " + policy.name + " filtering");
    std::vector<TermIdSeq> docs;
    docs.reserve(tokens.size());
    for (const auto& t : tokens) docs.push_back(to_term_ids(t, vocab));
    return fit_lda(std::span<const TermIdSeq>(docs), vocab, params);
}

TopicInference infer_topics(const TopicModel& model, const TermIdSeq& doc, int iterations,
                            std::uint64_t seed) {
    const std::size_t k_count = model.topics();
    const double alpha = model.params().alpha;
    TopicInference out;
    out.distribution.assign(k_count, 1.0 / static_cast<double>(k_count));
    if (doc.empty()) {
        out.unscorable = true;
        return out;
    }

    // (n_dk + a) phi_kw = a phi_kw + n_dk phi_kw: a fixed per-word bucket searched
    // in the model's cumulative phi row, plus a bucket over the document's topics.
    Rng rng(seed);
    std::vector<std::uint32_t> z(doc.size());
    std::vector<std::uint32_t> ndk(k_count, 0);
    TopicSet doc_topics(k_count);
    for (auto& k : z) {
        k = static_cast<std::uint32_t>(uniform_index(rng, k_count));
        if (ndk[k]++ == 0) doc_topics.insert(k);
    }
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < doc.size(); ++i) {
            std::uint32_t k = z[i];
            if (--ndk[k] == 0) doc_topics.erase(k);
            const TermId w = doc[i];
            const double* phi_row = model.phi_row(w);
            const double* cum_row = model.phi_cumulative_row(w);
            double r_total = 0;
            for (auto t : doc_topics.items()) r_total += ndk[t] * phi_row[t];
            const double s_total = alpha * cum_row[k_count - 1];
            double u = uniform01(rng) * (r_total + s_total);
            if (u < r_total) {
                const auto& dl = doc_topics.items();
                k = dl.back();
                for (auto t : dl) {
                    u -= ndk[t] * phi_row[t];
                    if (u < 0) {
                        k = t;
                        break;
                    }
                }
            } else {
                const double target = (u - r_total) / alpha;
                const double* hit = std::upper_bound(cum_row, cum_row + k_count, target);
                k = static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(hit - cum_row, k_count - 1));
            }
            z[i] = k;
            if (ndk[k]++ == 0) doc_topics.insert(k);
        }
    }
    const double denom = static_cast<double>(doc.size()) + static_cast<double>(k_count) * alpha;
    for (std::size_t k = 0; k < k_count; ++k) out.distribution[k] = (ndk[k] + alpha) / denom;
    return out;
}

TopicInference infer_topics(const TopicModel& model, const TokenSeq& tokens, int iterations,
                            std::uint64_t seed) {
    return infer_topics(model, to_term_ids(tokens, model.vocabulary()), iterations, seed);
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: length mismatch");
    double s = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] == 0.0) continue;
        if (q[k] == 0.0) throw std::domain_error("kl_divergence: q has no mass where p does");
        s += p[k] * std::log2(p[k] / q[k]);
    }
    return s;
}

double topic_novelty_score(std::span<const double> f, std::span<const double> c, bool distance) {
    if (f.size() != c.size()) throw std::invalid_argument("topic_novelty_score: length mismatch");
    std::vector<double> mix(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) mix[k] = 0.5 * (f[k] + c[k]);
    double js = std::clamp(0.5 * kl_divergence(c, mix) + 0.5 * kl_divergence(f, mix), 0.0, 1.0);
    return distance ? std::sqrt(js) : js;
}

std::uint64_t work_seed(std::uint64_t seed, const std::string& work_id) {
    return derive_seed(seed, fnv1a(work_id));
}

std::vector<TopicDistribution> infer_work_set(const TopicModel& model, const WorkSet& works,
                                              const TopicNoveltyOptions& opts, std::vector<bool>* unscorable) {
    std::vector<TopicDistribution> out;
    out.reserve(works.size());
    if (unscorable) unscorable->assign(works.size(), false);
    for (std::size_t i = 0; i < works.size(); ++i) {
        const Work& w = *works.works[i];
        auto inf = infer_topics(model, tokenize(w.text), opts.inference_iterations, work_seed(opts.seed, w.id));
        if (unscorable) (*unscorable)[i] = inf.unscorable;
        out.push_back(std::move(inf.distribution));
    }
    return out;
}

std::vector<NoveltyRecord> score_topic(const WorkSet& fandom_set, const TopicModel& model,
                                       const TopicNoveltyOptions& opts) {
    if (opts.span_days <= 0) throw std::invalid_argument("score_topic: span_days must be positive");
    const std::size_t n = fandom_set.size();
    const std::size_t k_count = model.topics();
    std::vector<bool> unscorable;
    auto dists = infer_work_set(model, fandom_set, opts, &unscorable);

    // prefix[i] = sum of dists[0..i), extended precision.
    std::vector<long double> prefix((n + 1) * k_count, 0.0L);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < k_count; ++k) {
            prefix[(i + 1) * k_count + k] = prefix[i * k_count + k] + dists[i][k];
        }
    }

    std::vector<NoveltyRecord> out;
    out.reserve(n);
    std::vector<double> center(k_count);
    for (std::size_t i = 0; i < n; ++i) {
        const Work& focal = *fandom_set.works[i];
        auto [lo, hi] = window_range(fandom_set, focal.publish_date, opts.span_days);
        const std::size_t size = hi - lo;
        NoveltyRecord rec{focal.id, focal.fandom, focal.publish_date, std::nullopt, std::nullopt, size};
        if (size >= opts.min_window && size > 0 && !unscorable[i]) {
            const long double members = static_cast<long double>(size + (opts.centroid_includes_focal ? 1 : 0));
            for (std::size_t k = 0; k < k_count; ++k) {
                long double s = prefix[hi * k_count + k] - prefix[lo * k_count + k];
                if (opts.centroid_includes_focal) s += dists[i][k];
                center[k] = static_cast<double>(s / members);
            }
            rec.s_topic = topic_novelty_score(dists[i], center, opts.js_distance);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<NoveltyRecord> score_fandom_topic(const CorpusStore& store, const std::string& fandom,
                                              const TopicModel& model, const TopicNoveltyOptions& opts) {
    if (!store.has_fandom(fandom)) throw std::invalid_argument("unknown fandom: " + fandom);
    return score_topic(store.fandom_works(fandom), model, opts);
}

namespace {
constexpr const char* kCheckpointMagic = "noveltyscope-lda";
constexpr int kCheckpointVersion = 1;

std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <typename T>
T expect_field(std::istream& in, const std::string& name) {
    std::string key;
    T value{};
    if (!(in >> key) || key != name || !(in >> value)) {
        throw TopicModelError("checkpoint: expected field '" + name + "'");
    }
    return value;
}
}  // namespace

void save_model(const TopicModel& model, std::ostream& out) {
    const auto& p = model.params();
    const auto& vocab = model.vocabulary();
    out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
    out << "topics " << p.topics << '\n';
    out << "vocab_size " << vocab.size() << '\n';
    out << "alpha " << fmt_double(p.alpha) << '\n';
    out << "beta " << fmt_double(p.beta) << '\n';
    out << "iterations " << p.iterations << '\n';
    out << "seed " << p.seed << '\n';
    out << "policy " << vocab.policy().name << ' ' << (vocab.policy().drop_hapax ? 1 : 0) << ' '
        << vocab.policy().drop_top << '\n';
    out << "vocab\n";
    for (const auto& t : vocab.terms()) out << t << '\n';
    out << "counts\n";
    for (std::size_t k = 0; k < p.topics; ++k) {
        for (TermId w = 0; w < vocab.size(); ++w) {
            if (w) out << ' ';
            out << model.count(k, w);
        }
        out << '\n';
    }
}

TopicModel load_model(std::istream& in) {
    while (in.peek() == '#') in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != kCheckpointMagic) throw TopicModelError("checkpoint: bad header");
    if (version != kCheckpointVersion) throw TopicModelError("checkpoint: unsupported version");
    LdaParams p;
    p.topics = expect_field<std::size_t>(in, "topics");
    auto v = expect_field<std::size_t>(in, "vocab_size");
    p.alpha = expect_field<double>(in, "alpha");
    p.beta = expect_field<double>(in, "beta");
    p.iterations = expect_field<int>(in, "iterations");
    p.seed = expect_field<std::uint64_t>(in, "seed");
    VocabPolicy policy;
    int hapax = 0;
    std::string key;
    if (!(in >> key >> policy.name >> hapax >> policy.drop_top) || key != "policy") {
        throw TopicModelError("checkpoint: expected field 'policy'");
    }
    policy.drop_hapax = hapax != 0;
    if (!(in >> key) || key != "vocab") throw TopicModelError("checkpoint: expected vocab section");
    std::vector<std::string> terms(v);
    for (auto& t : terms) {
        if (!(in >> t)) throw TopicModelError("checkpoint: truncated vocabulary");
    }
    if (!std::is_sorted(terms.begin(), terms.end())) throw TopicModelError("checkpoint: vocabulary not sorted");
    if (!(in >> key) || key != "counts") throw TopicModelError("checkpoint: expected counts section");
    std::vector<std::uint32_t> word_topic(v * p.topics);
    for (std::size_t k = 0; k < p.topics; ++k) {
        for (std::size_t w = 0; w < v; ++w) {
            if (!(in >> word_topic[w * p.topics + k])) throw TopicModelError("checkpoint: truncated counts");
        }
    }
    return TopicModel(p, Vocabulary(std::move(terms), policy, "checkpoint"), std::move(word_topic));
}

}  // namespace noveltyscope
