#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wsi/corpus.hpp"
#include "wsi/dive.hpp"
#include "wsi/eval.hpp"
#include "wsi/refine.hpp"
#include "wsi/senses.hpp"
#include "wsi/sgns.hpp"
#include "wsi/synth.hpp"
#include "wsi/types.hpp"

namespace wsi::pipeline {

struct CorpusParams {
    int window = 10;
    int64_t min_count = 10;
    std::string stopwords_path;  // empty = builtin list
};

struct InduceParams {
    int top_n = 100;       // feature words per basis
    int topic_top_m = 1000;  // words per topic embedding
    int clusters = 2;
    uint64_t seed = 1;
    bool include_query = false;
    bool dump_ego = false;  // write ego_<word>.json per induced word
};

struct RefineParams {
    int iterations = 3;
    int sentence_len = 20;
    bool warm_start = false;
    uint64_t seed = 1;
};

struct EvalParams {
    std::string wcr_queries;  // empty = <out_dir>/wcr_queries.tsv
    int64_t pseudo_min_mentions = 200;
    uint64_t pseudo_seed = 1;
};

struct PipelineConfig {
    std::string out_dir = "out";
    std::string corpus_path;  // raw text input; gen-corpus writes it
    int threads = 1;
    CorpusParams corpus;
    dive::DiveTrainConfig dive;
    sgns::SgnsConfig sgns;
    InduceParams induce;
    RefineParams refine;
    EvalParams eval;
    synth::TopicCorpusConfig sample;

    // Artifact locations inside out_dir.
    std::string corpus_file() const;
    std::string tokens_file() const;
    std::string vocab_file() const;
    std::string cooc_file() const;
    std::string dive_file() const;
    std::string sgns_file() const;
    std::string senses_file() const;
    std::string inventory_file() const;
    std::string refined_senses_file() const;
    std::string refined_sgns_file() const;
    std::string refined_vocab_file() const;
    std::string tagged_file() const;
    std::string wcr_queries_file() const;
    std::string wcr_report_file() const;
    std::string pseudo_report_file() const;
};

PipelineConfig config_from_json_text(const std::string& text, const std::string& origin);
std::string config_to_json_text(const PipelineConfig& cfg);
PipelineConfig load_config(const std::string& path);

// Stage runners; each verifies its inputs (DependencyError names the missing
// artifact), writes its outputs plus an effective-config snapshot next to
// them, and is idempotent for fixed inputs and seeds.
void stage_gen_corpus(const PipelineConfig& cfg);
void stage_ingest(const PipelineConfig& cfg);
void stage_cooc(const PipelineConfig& cfg);
void stage_train_dive(const PipelineConfig& cfg);
void stage_train_sgns(const PipelineConfig& cfg);
void stage_induce(const PipelineConfig& cfg, const std::vector<std::string>& words, bool all_words);
void stage_refine(const PipelineConfig& cfg);
// When `synthesize` > 0, queries are generated from the induced senses first.
void stage_eval_wcr(const PipelineConfig& cfg, int synthesize);
void stage_eval_pseudo(const PipelineConfig& cfg, const std::string& word_a,
                       const std::string& word_b);
void stage_inspect(const PipelineConfig& cfg, const std::string& word, std::ostream& out);

struct PseudoReport {
    std::vector<double> purity;  // one entry per E-step
    std::vector<double> churn;
    double final_ari = 0.0;
    int senses = 0;
};

// Conflates two words and runs the induction + refinement pipeline on the
// modified corpus; purity is measured against the conflation's gold labels.
PseudoReport run_pseudoword_experiment(const corpus::TokenStream& tokens,
                                       const corpus::Vocabulary& vocab, const std::string& word_a,
                                       const std::string& word_b, const PipelineConfig& cfg,
                                       uint64_t seed);

// Induction for one query over prebuilt caches; shared by stage_induce and the
// experiment runner.
struct InductionContext {
    const Matrix* dive_words = nullptr;
    const egograph::TopWordsCache* cache = nullptr;
    const std::vector<Vector>* topic_vecs = nullptr;  // per basis
    const corpus::Vocabulary* vocab = nullptr;
    InduceParams params;
};
senses::SenseModel induce_word(const InductionContext& ctx, WordId query);

}  // namespace wsi::pipeline
