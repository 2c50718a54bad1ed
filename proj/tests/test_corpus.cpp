#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "wsi/corpus.hpp"
#include "wsi/rng.hpp"
#include "test_util.hpp"

using namespace wsi;
using namespace wsi::corpus;

namespace {

TokenizeRules stop_the() {
    TokenizeRules rules;
    rules.stop_words = {"the"};
    return rules;
}

// Random token stream with OOV gaps and several documents.
TokenStream random_stream(size_t n, int vocab, double oov_frac, int docs, uint64_t seed) {
    Rng rng(seed);
    TokenStream s;
    s.ids.reserve(n);
    for (int d = 0; d < docs; ++d) s.doc_offsets.push_back(d * (n / docs));
    for (size_t i = 0; i < n; ++i) {
        s.ids.push_back(rng.uniform() < oov_frac ? kNoWord
                                                 : static_cast<WordId>(rng.index(vocab)));
    }
    return s;
}

// Literal double-loop counting oracle over all position pairs.
std::map<std::pair<WordId, WordId>, uint32_t> quadratic_counts(const TokenStream& s, int window) {
    std::map<std::pair<WordId, WordId>, uint32_t> counts;
    for (size_t d = 0; d < s.docs(); ++d) {
        auto [lo, hi] = s.doc_range(d);
        for (size_t i = lo; i < hi; ++i) {
            for (size_t j = lo; j < hi; ++j) {
                if (i == j) continue;
                size_t dist = i > j ? i - j : j - i;
                if (dist > static_cast<size_t>(window)) continue;
                if (s.ids[i] == kNoWord || s.ids[j] == kNoWord) continue;
                ++counts[{s.ids[i], s.ids[j]}];
            }
        }
    }
    return counts;
}

}  // namespace

TEST_CASE("tokenize applies stop list and lowercases") {
    auto text = tokenize("The cat sat.", stop_the());
    REQUIRE(text.tokens == std::vector<std::string>{"cat", "sat"});
    CHECK(text.doc_offsets == std::vector<size_t>{0});
}

TEST_CASE("tokenize of empty input is empty") {
    auto text = tokenize("", stop_the());
    CHECK(text.tokens.empty());
    CHECK(text.doc_offsets.empty());
}

TEST_CASE("tokenize splits documents on blank lines") {
    auto text = tokenize("alpha beta\ngamma\n\ndelta epsilon\n\n\nzeta", TokenizeRules::none());
    CHECK(text.tokens == std::vector<std::string>{"alpha", "beta", "gamma", "delta", "epsilon",
                                                  "zeta"});
    CHECK(text.doc_offsets == std::vector<size_t>{0, 3, 5});
}

TEST_CASE("tokenize treats punctuation digits and non-ascii as separators") {
    auto text = tokenize("ab12cd, EF-gh caf\xC3\xA9 x", TokenizeRules::none());
    CHECK(text.tokens == std::vector<std::string>{"ab", "cd", "ef", "gh", "caf", "x"});
}

TEST_CASE("tokenize rejects invalid utf-8 with the byte position") {
    try {
        tokenize(std::string("abc \xFF def"), TokenizeRules::none());
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.line == 4);
    }
    CHECK_THROWS_AS(tokenize(std::string("ab\xC3"), TokenizeRules::none()), SchemaError);
}

TEST_CASE("tokenize count matches construction on a 1000-line file") {
    // The file is assembled from a known number of kept tokens plus stop words
    // and punctuation noise, so the expected count is known by construction.
    Rng rng(11);
    std::ostringstream text;
    size_t expected = 0;
    for (int line = 0; line < 1000; ++line) {
        int words = 1 + static_cast<int>(rng.index(8));
        for (int w = 0; w < words; ++w) {
            if (rng.uniform() < 0.3) {
                text << "the ";
            } else {
                text << "tok" << static_cast<char>('a' + rng.index(26)) << ", ";
                ++expected;
            }
        }
        text << "\n";
    }
    auto out = tokenize(text.str(), stop_the());
    CHECK(out.tokens.size() == expected);
}

TEST_CASE("build_vocabulary orders by frequency then lexicographically") {
    Vocabulary v = build_vocabulary({"a", "b", "a"}, 1);
    REQUIRE(v.size() == 2);
    CHECK(v.words[0] == "a");
    CHECK(v.freq[0] == 2);
    CHECK(v.words[1] == "b");
    CHECK(v.freq[1] == 1);
    CHECK(v.lookup("a") == 0);

    Vocabulary v2 = build_vocabulary({"a", "b", "a"}, 2);
    REQUIRE(v2.size() == 1);
    CHECK(v2.words[0] == "a");

    Vocabulary v3 = build_vocabulary({"zz", "aa", "mm"}, 1);
    CHECK(v3.words == std::vector<std::string>{"aa", "mm", "zz"});
}

TEST_CASE("build_vocabulary rejects empty result and bad min_count") {
    CHECK_THROWS_AS(build_vocabulary({}, 1), ContractError);
    CHECK_THROWS_AS(build_vocabulary({"a"}, 2), ContractError);
    CHECK_THROWS_AS(build_vocabulary({"a"}, 0), ContractError);
}

TEST_CASE("build_vocabulary matches a hash-count oracle on a 10k corpus") {
    Rng rng(5);
    std::vector<std::string> tokens;
    for (int i = 0; i < 10000; ++i) {
        tokens.push_back("w" + std::to_string(rng.index(300)));
    }
    std::map<std::string, int64_t> counts;
    for (const auto& t : tokens) ++counts[t];

    Vocabulary v = build_vocabulary(tokens, 10);
    std::set<std::string> expected;
    for (const auto& [w, c] : counts) {
        if (c >= 10) expected.insert(w);
    }
    REQUIRE(v.size() == expected.size());
    for (size_t i = 0; i < v.size(); ++i) {
        CHECK(expected.count(v.words[i]) == 1);
        CHECK(v.freq[i] == counts[v.words[i]]);
        if (i > 0) {
            bool ordered = v.freq[i - 1] > v.freq[i] ||
                           (v.freq[i - 1] == v.freq[i] && v.words[i - 1] < v.words[i]);
            CHECK(ordered);
        }
    }
}

TEST_CASE("to_ids marks out-of-vocabulary tokens as gaps") {
    Vocabulary v = build_vocabulary({"a", "a", "b", "b"}, 2);
    TokenizedText text;
    text.tokens = {"a", "rare", "b"};
    text.doc_offsets = {0};
    TokenStream s = to_ids(text, v);
    REQUIRE(s.ids.size() == 3);
    CHECK(s.ids[1] == kNoWord);
    CHECK(s.ids[0] == v.lookup("a"));
}

TEST_CASE("count_cooccurrences on [a b a] with window 1") {
    Vocabulary v = build_vocabulary({"a", "b", "a"}, 1);
    TokenizedText text{{"a", "b", "a"}, {0}};
    TokenStream s = to_ids(text, v);
    CooccurrenceTable t = count_cooccurrences(s, v.size(), 1);
    WordId a = v.lookup("a");
    WordId b = v.lookup("b");
    CHECK(t.count(a, b) == 2);
    CHECK(t.count(b, a) == 2);
    CHECK(t.count(a, a) == 0);
    CHECK(t.word_totals[static_cast<size_t>(a)] == doctest::Approx(2));
    CHECK(t.word_totals[static_cast<size_t>(b)] == doctest::Approx(2));
    CHECK(t.z == doctest::Approx(2.0));
}

TEST_CASE("count_cooccurrences of a single token is empty") {
    TokenStream s;
    s.ids = {0};
    s.doc_offsets = {0};
    CooccurrenceTable t = count_cooccurrences(s, 1, 10);
    CHECK(t.nnz() == 0);
    CHECK(t.word_totals[0] == 0.0);
    CHECK(t.z == 0.0);
}

TEST_CASE("counting matches the quadratic oracle on a random 5k stream") {
    TokenStream s = random_stream(5000, 60, 0.1, 7, 42);
    CooccurrenceTable t = count_cooccurrences(s, 60, 10, 3);
    auto oracle = quadratic_counts(s, 10);
    size_t nnz = 0;
    for (const auto& [pair, n] : oracle) {
        CHECK(t.count(pair.first, pair.second) == n);
        ++nnz;
    }
    CHECK(t.nnz() == nnz);
}

TEST_CASE("co-occurrence symmetry and conservation") {
    TokenStream s = random_stream(4000, 40, 0.15, 5, 9);
    CooccurrenceTable t = count_cooccurrences(s, 40, 6);
    for (WordId w = 0; w < 40; ++w) {
        for (size_t k = t.offsets[static_cast<size_t>(w)];
             k < t.offsets[static_cast<size_t>(w) + 1]; ++k) {
            CHECK(t.count(t.ctx[k], w) == t.cnt[k]);
        }
    }
    // Conservation: sum of word totals is twice the number of counted
    // unordered position pairs.
    size_t pairs = 0;
    for (size_t d = 0; d < s.docs(); ++d) {
        auto [lo, hi] = s.doc_range(d);
        for (size_t i = lo; i < hi; ++i) {
            if (s.ids[i] == kNoWord) continue;
            for (size_t j = i + 1; j < hi && j <= i + 6; ++j) {
                if (s.ids[j] != kNoWord) ++pairs;
            }
        }
    }
    double total = 0.0;
    for (double x : t.word_totals) total += x;
    CHECK(total == doctest::Approx(2.0 * static_cast<double>(pairs)));
}

TEST_CASE("windows do not cross document boundaries") {
    TokenStream s;
    s.ids = {0, 1, 2, 3};
    s.doc_offsets = {0, 2};
    CooccurrenceTable t = count_cooccurrences(s, 4, 10);
    CHECK(t.count(1, 2) == 0);
    CHECK(t.count(0, 1) == 1);
    CHECK(t.count(2, 3) == 1);
}

TEST_CASE("sharded counting equals the serial reference for any thread count") {
    TokenStream s = random_stream(6000, 50, 0.1, 4, 77);
    CooccurrenceTable serial = count_cooccurrences_serial(s, 50, 8);
    for (int threads : {1, 2, 5}) {
        CooccurrenceTable t = count_cooccurrences(s, 50, 8, threads);
        REQUIRE(t.nnz() == serial.nnz());
        CHECK(t.ctx == serial.ctx);
        CHECK(t.cnt == serial.cnt);
        CHECK(t.offsets == serial.offsets);
        CHECK(t.z == serial.z);
    }
}

TEST_CASE("counting is deterministic") {
    TokenStream s = random_stream(3000, 30, 0.1, 3, 123);
    CooccurrenceTable a = count_cooccurrences(s, 30, 10, 4);
    CooccurrenceTable b = count_cooccurrences(s, 30, 10, 4);
    CHECK(a.ctx == b.ctx);
    CHECK(a.cnt == b.cnt);
    CHECK(a.word_totals == b.word_totals);
}

TEST_CASE("default stop word list is plausible and lowercase") {
    const auto& words = default_stop_words();
    CHECK(words.size() >= 250);
    std::set<std::string> unique(words.begin(), words.end());
    CHECK(unique.size() == words.size());
    CHECK(unique.count("the") == 1);
    CHECK(unique.count("and") == 1);
    for (const auto& w : words) {
        for (char ch : w) CHECK((ch >= 'a' && ch <= 'z'));
    }
}
