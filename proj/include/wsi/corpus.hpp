#pragma once

#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wsi/types.hpp"

namespace wsi::corpus {

// Shipped default English stop-word list (lowercase, ~300 entries).
const std::vector<std::string>& default_stop_words();

struct TokenizeRules {
    std::unordered_set<std::string> stop_words;

    static TokenizeRules defaults();
    static TokenizeRules none();  // no stop words, mostly for tests
};

struct TokenizedText {
    std::vector<std::string> tokens;
    // Start index of each document in `tokens`; documents are delimited by
    // blank lines in the raw text. Empty when there are no tokens.
    std::vector<size_t> doc_offsets;

    size_t docs() const { return doc_offsets.size(); }
    std::pair<size_t, size_t> doc_range(size_t d) const {
        size_t lo = doc_offsets[d];
        size_t hi = d + 1 < doc_offsets.size() ? doc_offsets[d + 1] : tokens.size();
        return {lo, hi};
    }
};

// Lowercased ASCII-alphabetic tokens; everything else separates tokens and a
// blank line starts a new document. Stop words are dropped entirely.
// Throws SchemaError with the byte position on invalid UTF-8.
TokenizedText tokenize(std::string_view raw_text, const TokenizeRules& rules);

struct Vocabulary {
    std::vector<std::string> words;  // index == id; ordered by descending frequency
    std::vector<int64_t> freq;
    std::unordered_map<std::string, WordId> id_of;
    int64_t min_count = 1;

    size_t size() const { return words.size(); }
    bool contains(const std::string& w) const { return id_of.count(w) > 0; }
    WordId lookup(const std::string& w) const {
        auto it = id_of.find(w);
        return it == id_of.end() ? kNoWord : it->second;
    }
    // Rebuilds id_of from words; freq must be parallel to words.
    void reindex();
};

// Ids are assigned by descending frequency, ties broken lexicographically.
// Throws ContractError when no token survives the min_count filter.
Vocabulary build_vocabulary(const std::vector<std::string>& tokens, int64_t min_count);

struct TokenStream {
    // kNoWord marks an out-of-vocabulary token that still occupies a position.
    std::vector<WordId> ids;
    std::vector<size_t> doc_offsets;

    size_t docs() const { return doc_offsets.size(); }
    std::pair<size_t, size_t> doc_range(size_t d) const {
        size_t lo = doc_offsets[d];
        size_t hi = d + 1 < doc_offsets.size() ? doc_offsets[d + 1] : ids.size();
        return {lo, hi};
    }
};

TokenStream to_ids(const TokenizedText& text, const Vocabulary& vocab);

// Sparse symmetric co-occurrence counts in CSR layout, rows sorted by
// context id.
struct CooccurrenceTable {
    int window = 10;
    std::vector<size_t> offsets;  // size vocab+1
    std::vector<WordId> ctx;
    std::vector<uint32_t> cnt;
    std::vector<double> word_totals;  // #(w)
    double z = 0.0;                   // mean of #(w) over the vocabulary

    size_t vocab_size() const { return word_totals.size(); }
    size_t nnz() const { return ctx.size(); }
    uint32_t count(WordId w, WordId c) const;

    // Builds the CSR table from (word, context, count) triples and derives
    // word_totals and z. Triples may be unsorted but must not repeat a pair.
    static CooccurrenceTable from_triples(size_t vocab_size, int window,
                                          std::vector<std::tuple<WordId, WordId, uint32_t>> triples);
};

// For each position, every in-vocabulary token at distance 1..window in both
// directions (within the same document) increments #(w, c). Sharded across
// `threads` chunks; the merged result is independent of the thread count.
CooccurrenceTable count_cooccurrences(const TokenStream& tokens, size_t vocab_size, int window,
                                      int threads = 1);

// Serial reference implementation kept for tests and benchmarks.
CooccurrenceTable count_cooccurrences_serial(const TokenStream& tokens, size_t vocab_size,
                                             int window);

}  // namespace wsi::corpus
