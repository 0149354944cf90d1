#include "noveltyscope/text.hpp"

#include "noveltyscope/corpus.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace noveltyscope {

namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes one code point starting at s[i]; advances i. Malformed input yields kInvalid.
char32_t next_code_point(std::string_view s, std::size_t& i) {
    auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return kInvalid;
    }
    if (i + len > s.size()) {
        ++i;
        return kInvalid;
    }
    for (int k = 1; k < len; ++k) {
        auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return kInvalid;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++i;
        return kInvalid;
    }
    i += len;
    return cp;
}

bool is_apostrophe(char32_t c) { return c == U'\'' || c == 0x2019; }

// Non-ASCII code points count as word characters unless they fall in a
// punctuation, symbol or space block.
bool is_word_char(char32_t c) {
    if (c < 0x80) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    }
    if (c == kInvalid) return false;
    if (c <= 0xBF) return c == 0xAA || c == 0xB5 || c == 0xBA;
    if (c == 0xD7 || c == 0xF7) return false;
    if (c >= 0x2000 && c <= 0x2BFF) return false;
    if (c >= 0x3000 && c <= 0x303F) return false;
    if (c >= 0xFE30 && c <= 0xFE4F) return false;
    if (c >= 0xFF00 && c <= 0xFF0F) return false;
    if (c >= 0xFF1A && c <= 0xFF20) return false;
    if (c >= 0xFF3B && c <= 0xFF40) return false;
    if (c >= 0xFF5B && c <= 0xFF65) return false;
    if (c >= 0xFFF0 && c <= 0xFFFF) return false;
    if (c >= 0x1F000 && c <= 0x1FAFF) return false;
    return true;
}

char32_t to_lower(char32_t c) {
    if (c < 0x80) return (c >= 'A' && c <= 'Z') ? c + 32 : c;
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
    if (c >= 0x100 && c <= 0x137) return c | 1;
    if (c >= 0x139 && c <= 0x148) return (c & 1) ? c + 1 : c;
    if (c >= 0x14A && c <= 0x177) return c | 1;
    if (c == 0x178) return 0xFF;
    if (c >= 0x179 && c <= 0x17E) return (c & 1) ? c + 1 : c;
    if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 0x20;
    if (c >= 0x410 && c <= 0x42F) return c + 0x20;
    if (c >= 0x400 && c <= 0x40F) return c + 0x50;
    return c;
}

void append_utf8(std::string& out, char32_t c) {
    if (c < 0x80) {
        out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (c >> 6)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (c >> 12)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (c >> 18)));
        out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
}

template <typename Emit>
void scan_tokens(std::string_view text, Emit&& emit) {
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        char32_t c = next_code_point(text, i);
        if (is_apostrophe(c)) {
            current.push_back('\'');
        } else if (is_word_char(c)) {
            append_utf8(current, to_lower(c));
        } else if (!current.empty()) {
            emit(current);
            current.clear();
        }
    }
    if (!current.empty()) emit(current);
}

}  // namespace

TokenSeq tokenize(std::string_view text) {
    TokenSeq out;
    scan_tokens(text, [&](std::string& tok) { out.push_back(tok); });
    return out;
}

std::size_t count_tokens(std::string_view text) {
    std::size_t n = 0;
    bool in_token = false;
    std::size_t i = 0;
    while (i < text.size()) {
        char32_t c = next_code_point(text, i);
        bool word = is_apostrophe(c) || is_word_char(c);
        if (word && !in_token) ++n;
        in_token = word;
    }
    return n;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, VocabPolicy policy, std::string source)
    : terms_(std::move(terms)), policy_(std::move(policy)), source_(std::move(source)) {
    std::sort(terms_.begin(), terms_.end());
    terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
    index_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        index_.emplace(terms_[i], static_cast<TermId>(i));
    }
}

std::optional<TermId> Vocabulary::id(std::string_view term) const {
    auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vocabulary build_vocabulary(const TermFrequencies& corpus_freq, const VocabPolicy& policy,
                            std::string source) {
    std::vector<std::pair<std::string, std::uint64_t>> ranked(corpus_freq.begin(), corpus_freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    bool degenerate = policy.drop_top > 0 && ranked.size() < policy.drop_top;
    std::size_t skip = std::min(policy.drop_top, ranked.size());

    std::vector<std::string> kept;
    for (std::size_t i = skip; i < ranked.size(); ++i) {
        if (policy.drop_hapax && ranked[i].second == 1) continue;
        kept.push_back(ranked[i].first);
    }
    if (kept.empty()) degenerate = true;
    Vocabulary vocab(std::move(kept), policy, std::move(source));
    vocab.set_degenerate(degenerate);
    return vocab;
}

Vocabulary build_vocabulary(std::span<const TokenSeq> docs, const VocabPolicy& policy,
                            std::string source) {
    TermFrequencies freq;
    for (const auto& doc : docs) {
        for (const auto& tok : doc) ++freq[tok];
    }
    return build_vocabulary(freq, policy, std::move(source));
}

Vocabulary build_vocabulary(const WorkSet& works, const VocabPolicy& policy) {
    if (works.works.empty()) throw std::invalid_argument("build_vocabulary: empty work set");
    TermFrequencies freq;
    for (const Work* w : works.works) {
        scan_tokens(w->text, [&](std::string& tok) { ++freq[tok]; });
    }
    return build_vocabulary(freq, policy, works.provenance);
}

SparseCounts term_counts(const TokenSeq& tokens, const Vocabulary& vocab) {
    std::map<TermId, std::uint32_t> counts;
    for (const auto& tok : tokens) {
        if (auto id = vocab.id(tok)) ++counts[*id];
    }
    return {counts.begin(), counts.end()};
}

}  // namespace noveltyscope
