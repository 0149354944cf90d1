#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace noveltyscope {

struct WorkSet;

using TokenSeq = std::vector<std::string>;
using TermId = std::uint32_t;

// Sorted by term id, counts > 0.
using SparseCounts = std::vector<std::pair<TermId, std::uint32_t>>;

// Lowercased maximal runs of letters, digits and apostrophes. U+2019 is read
// as an apostrophe; malformed UTF-8 bytes act as separators.
TokenSeq tokenize(std::string_view text);

// Same token boundaries as tokenize() without materializing the tokens.
std::size_t count_tokens(std::string_view text);

struct VocabPolicy {
    std::string name;
    bool drop_hapax = true;
    std::size_t drop_top = 0;

    static VocabPolicy tfidf() { return {"tfidf", true, 0}; }
    static VocabPolicy lda() { return {"lda", true, 500}; }
};

class Vocabulary {
public:
    Vocabulary() = default;
    // Ids are assigned in lexicographic order of `terms`.
    Vocabulary(std::vector<std::string> terms, VocabPolicy policy, std::string source);

    std::optional<TermId> id(std::string_view term) const;
    const std::string& term(TermId id) const { return terms_[id]; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    const std::vector<std::string>& terms() const { return terms_; }
    const VocabPolicy& policy() const { return policy_; }
    const std::string& source() const { return source_; }

    // Set when the policy could not be applied as intended (fewer distinct
    // terms than drop_top, or nothing survived).
    bool degenerate() const { return degenerate_; }
    void set_degenerate(bool d) { degenerate_ = d; }

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, TermId> index_;
    VocabPolicy policy_;
    std::string source_;
    bool degenerate_ = false;
};

using TermFrequencies = std::unordered_map<std::string, std::uint64_t>;

Vocabulary build_vocabulary(const TermFrequencies& corpus_freq, const VocabPolicy& policy,
                            std::string source = {});
Vocabulary build_vocabulary(std::span<const TokenSeq> docs, const VocabPolicy& policy,
                            std::string source = {});
// Throws std::invalid_argument on an empty work set.
Vocabulary build_vocabulary(const WorkSet& works, const VocabPolicy& policy);

SparseCounts term_counts(const TokenSeq& tokens, const Vocabulary& vocab);

}  // namespace noveltyscope
