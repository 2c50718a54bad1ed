#pragma once

#include <string>
#include <vector>

#include "wsi/corpus.hpp"
#include "wsi/egograph.hpp"
#include "wsi/eval.hpp"
#include "wsi/refine.hpp"
#include "wsi/senses.hpp"
#include "wsi/types.hpp"

namespace wsi::io {

// All text artifacts are UTF-8 with LF line endings; floating-point values in
// non-JSON formats carry 6 significant digits. Loaders throw SchemaError with
// the offending file and line.

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Lines of `word<TAB>freq`, ordered by id.
void save_vocabulary(const std::string& path, const corpus::Vocabulary& vocab);
corpus::Vocabulary load_vocabulary(const std::string& path);

// One document per line, tokens separated by single spaces.
void save_tokens(const std::string& path, const corpus::TokenizedText& text);
corpus::TokenizedText load_tokens(const std::string& path);

// Header `#cooc v1 <|V|> <window>`, then `word<TAB>context<TAB>count` ordered
// by (word id, context id).
void save_cooccurrence(const std::string& path, const corpus::CooccurrenceTable& table,
                       const corpus::Vocabulary& vocab);
corpus::CooccurrenceTable load_cooccurrence(const std::string& path,
                                            const corpus::Vocabulary& vocab);

// First line `<|V|> <L>`, then `word v1 ... vL`.
void save_embedding(const std::string& path, const Matrix& word_vecs,
                    const std::vector<std::string>& words);

struct LoadedEmbedding {
    std::vector<std::string> words;
    Matrix vecs;
};
LoadedEmbedding load_embedding(const std::string& path);

// JSON array of {word, senses: [{id, bases: [{index, weight}], vector}]}.
void save_sense_models(const std::string& path, const std::vector<senses::SenseModel>& models);
std::vector<senses::SenseModel> load_sense_models(const std::string& path);

// TSV `word<TAB>sense_id<TAB>comma-separated inventory words`.
void save_inventory(const std::string& path, const std::vector<senses::SenseModel>& models,
                    const Matrix& dive_words, const corpus::Vocabulary& vocab, int top_k = 20);

// TSV `target<TAB>true|false<TAB>comma-separated context words`; each `true`
// line opens a query and adjacent `false` lines with the same target fill its
// 10 false contexts.
void save_wcr_queries(const std::string& path, const std::vector<eval::WcrQuery>& queries);
std::vector<eval::WcrQuery> load_wcr_queries(const std::string& path);

// JSON {query, T, nodes, adjacency}.
void save_ego_network(const std::string& path, const egograph::EgoNetwork& net,
                      const std::string& query_word);

void save_eval_report(const std::string& path, const eval::EvalReport& report);

// Plain text, one sentence chunk per line, sense tokens inline;
// out-of-vocabulary gaps are dropped.
void save_tagged_corpus(const std::string& path, const refine::SenseTaggedCorpus& tagged,
                        int sentence_len);

}  // namespace wsi::io
