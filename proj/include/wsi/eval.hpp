#pragma once

#include <map>
#include <string>
#include <vector>

#include "wsi/corpus.hpp"
#include "wsi/senses.hpp"
#include "wsi/sgns.hpp"
#include "wsi/types.hpp"

namespace wsi::eval {

using SenseModelMap = std::map<std::string, senses::SenseModel>;

// Dense embedding plus its vocabulary, the fallback for words without an
// induced sense model.
struct EmbeddingView {
    const sgns::DenseEmbedding* emb = nullptr;
    const corpus::Vocabulary* vocab = nullptr;

    const Vector* lookup(const std::string& word, Vector& scratch) const;
};

// For every sense k of the target, the context embedding is the mean over the
// context words, where a polysemous context word contributes the sense vector
// closest to s_k and a monosemous one its single vector; returns
// max_k cos(s_k, e_c(k)). Throws EmptyContextError when no context word is
// usable.
double target_context_similarity(const SenseModelMap& models, const EmbeddingView& fallback,
                                 const std::string& target,
                                 const std::vector<std::string>& context_words);

struct WcrQuery {
    std::string target;
    std::vector<std::string> true_context;
    std::vector<std::vector<std::string>> false_contexts;  // exactly 10

    void validate() const;
};

struct QueryResult {
    std::string target;
    bool correct = false;
    double true_similarity = 0.0;
    double best_false_similarity = 0.0;
};

struct EvalReport {
    std::string metric;
    double value = 0.0;  // mean of the per-query indicator
    std::vector<QueryResult> per_query;
};

// Precision@1: a query scores 1 iff the true context strictly outranks every
// false context (ties count as failures).
EvalReport wcr_precision_at_1(const SenseModelMap& models, const EmbeddingView& fallback,
                              const std::vector<WcrQuery>& queries);

struct PseudowordTask {
    corpus::TokenStream tokens;  // ids into `vocab`
    corpus::Vocabulary vocab;    // word_a/word_b replaced by `pseudo`
    std::string pseudo;
    // Gold label per pseudo mention: position -> 0 (was word_a) or 1 (was
    // word_b), ordered by position.
    std::vector<std::pair<size_t, int>> gold;
};

// Conflates every mention of two distinct words into one ambiguous token and
// keeps the source labels. Throws ContractError when either word has fewer
// than `min_mentions` mentions or `pseudo` already exists.
PseudowordTask make_pseudoword_task(const corpus::TokenStream& tokens,
                                    const corpus::Vocabulary& vocab, const std::string& word_a,
                                    const std::string& word_b, const std::string& pseudo,
                                    int64_t min_mentions = 1);

struct PurityReport {
    double purity = 0.0;
    double adjusted_rand = 0.0;
    size_t mentions = 0;
};

// Purity = sum over clusters of the majority gold label count, over total
// mentions; assignments and gold must cover the same positions.
PurityReport pseudoword_purity(const std::vector<std::pair<size_t, int>>& assignments,
                               const std::vector<std::pair<size_t, int>>& gold);

}  // namespace wsi::eval
