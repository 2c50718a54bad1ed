#pragma once

#include <string>
#include <vector>

#include "wsi/corpus.hpp"
#include "wsi/eval.hpp"
#include "wsi/rng.hpp"
#include "wsi/senses.hpp"
#include "wsi/types.hpp"

namespace wsi::synth {

// Topic identifiers of the generated corpus; index into curated_topic_words().
int topic_count();
const std::vector<std::string>& curated_topic_words(int topic);
const std::vector<std::string>& curated_shared_words();

// Deterministic word string for (topic, rank); curated words first, generated
// alphabetic fillers after.
std::string topic_word(int topic, int rank);

struct TopicCorpusConfig {
    int words_per_topic = 220;
    int shared_words = 160;
    int doc_len = 60;
    size_t total_tokens = 1'000'000;
    double zipf = 1.05;         // rank exponent within a pool
    double shared_frac = 0.15;  // probability of drawing from the shared pool
    uint64_t seed = 20240801;
};

// Mixture-of-topics corpus: each document draws one topic and fills with
// Zipf-distributed topical words plus shared filler. Documents map to corpus
// doc boundaries.
corpus::TokenizedText topic_corpus(const TopicCorpusConfig& cfg);

// Two disjoint word groups that never co-occur; documents alternate groups.
corpus::TokenizedText two_group_corpus(int words_per_group, int docs, int doc_len, uint64_t seed);

struct NestedCorpusConfig {
    int context_words = 40;
    int x_blocks = 120;
    int block_context = 4;  // context words around each mention
    int extra_y_blocks = 60;
    int background_docs = 80;
    int background_len = 12;
    uint64_t seed = 7;
};

// Corpus where the narrow word `x` and the broad word `y` satisfy
// #(x,c) <= #(y,c) for every context c: every x block is emitted again twice
// with y in place of x, and y gets extra blocks of its own. Blocks are
// separate documents so windows never mix them.
struct NestedCorpus {
    corpus::TokenizedText text;
    std::string x;
    std::string y;
};
NestedCorpus nested_context_corpus(const NestedCorpusConfig& cfg);

// WCR-style queries built from induced sense inventories: the true context is
// the target's own inventory, false contexts are inventories of other targets.
// With `dominant_only` each target contributes one query from its
// highest-relevance sense (a forced second cluster of a monosemous word has no
// true context to speak of); otherwise every sense becomes a query.
std::vector<eval::WcrQuery> make_wcr_queries(const std::vector<senses::SenseModel>& models,
                                             const Matrix& dive_words,
                                             const corpus::Vocabulary& vocab, int context_size,
                                             uint64_t seed, bool dominant_only = true);

}  // namespace wsi::synth
