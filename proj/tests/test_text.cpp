#include "noveltyscope/text.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <random>

using namespace noveltyscope;

TEST_CASE("tokenize rule examples") {
    CHECK(tokenize("I am Groot. I am Groot.") == TokenSeq{"i", "am", "groot", "i", "am", "groot"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("don't-stop 01010") == TokenSeq{"don't", "stop", "01010"});
}

TEST_CASE("tokenize handles non-ASCII text") {
    CHECK(tokenize("ÉCOLE Straße") == TokenSeq{"école", "straße"});
    CHECK(tokenize("ΣΟΦΙΑ и Москва") == TokenSeq{"σοφια", "и", "москва"});
    CHECK(tokenize("it\xE2\x80\x99s \xE2\x80\x94 fine") == TokenSeq{"it's", "fine"});
    CHECK(tokenize("bad\xFFutf8") == TokenSeq{"bad", "utf8"});
    CHECK(tokenize("漢字、かな") == TokenSeq{"漢字", "かな"});
}

TEST_CASE("tokenize is idempotent on its own joined output and agrees with count_tokens") {
    std::mt19937 rng(3);
    const std::string alphabet = "abcXYZ019' .,;-!\n\t\"()";
    for (int trial = 0; trial < 200; ++trial) {
        std::string s;
        int len = rng() % 80;
        for (int i = 0; i < len; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
        auto toks = tokenize(s);
        std::string joined;
        for (const auto& t : toks) {
            CHECK_FALSE(t.empty());
            joined += t + " ";
        }
        CHECK(tokenize(joined) == toks);
        CHECK(count_tokens(s) == toks.size());
    }
}

TEST_CASE("build_vocabulary tfidf policy removes hapaxes") {
    TermFrequencies freq{{"a", 5}, {"b", 2}, {"c", 1}};
    auto v = build_vocabulary(freq, VocabPolicy::tfidf());
    CHECK(v.terms() == std::vector<std::string>{"a", "b"});
    CHECK(v.id("a") == 0u);
    CHECK(v.id("b") == 1u);
    CHECK_FALSE(v.id("c").has_value());
    CHECK_FALSE(v.degenerate());
}

TEST_CASE("build_vocabulary lda policy drops top 500 with lexicographic ties") {
    TermFrequencies freq;
    for (int i = 0; i < 600; ++i) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "t%03d", i);
        freq[buf] = i < 550 ? 10 : 1;
    }
    auto v = build_vocabulary(freq, VocabPolicy::lda());
    CHECK(v.size() == 50);  // t500..t549 survive: ties broken by removing smaller strings first
    CHECK(v.terms().front() == "t500");
    CHECK(v.terms().back() == "t549");
    CHECK(v.size() <= 100);
}

TEST_CASE("build_vocabulary lda policy on a small corpus warns instead of failing") {
    TermFrequencies freq{{"a", 5}, {"b", 2}, {"c", 1}};
    auto v = build_vocabulary(freq, VocabPolicy::lda());
    CHECK(v.empty());
    CHECK(v.degenerate());
}

TEST_CASE("lda vocabulary is tfidf vocabulary minus the top terms") {
    std::mt19937 rng(11);
    TermFrequencies freq;
    for (int i = 0; i < 900; ++i) freq["w" + std::to_string(i)] = 1 + rng() % 40;
    auto tf = build_vocabulary(freq, VocabPolicy::tfidf());
    auto lda = build_vocabulary(freq, VocabPolicy::lda());
    for (const auto& t : lda.terms()) CHECK(tf.id(t).has_value());
    CHECK(tf.size() - lda.size() <= 500);
    for (const auto& t : tf.terms()) CHECK(freq[t] > 1);
}

TEST_CASE("build_vocabulary over an empty work set throws") {
    WorkSet empty;
    CHECK_THROWS_AS(build_vocabulary(empty, VocabPolicy::tfidf()), std::invalid_argument);
}

TEST_CASE("term_counts") {
    std::vector<std::string> terms{"i", "am", "groot"};
    Vocabulary v({"am", "groot", "i"}, VocabPolicy::tfidf(), "");
    auto c = term_counts({"i", "am", "groot", "i"}, v);
    // ids are lexicographic: am=0, groot=1, i=2
    CHECK(c == SparseCounts{{0, 1}, {1, 1}, {2, 2}});
    CHECK(term_counts({"x", "y"}, v).empty());
    CHECK(term_counts({}, v).empty());
}
