#pragma once

#include <string>
#include <vector>

#include "wsi/corpus.hpp"
#include "wsi/senses.hpp"
#include "wsi/sgns.hpp"
#include "wsi/types.hpp"

namespace wsi::refine {

// `word` -> `word_<sense>`; a literal separator inside the word is doubled so
// stripping stays unambiguous.
std::string sense_token(const std::string& word, int sense);
// Inverse of sense_token; identity for tokens without a sense suffix.
std::string strip_sense_token(const std::string& token);

struct MentionAssignment {
    size_t position;  // index into the original token stream
    int sense;
};

struct SenseTaggedCorpus {
    corpus::TokenStream tokens;  // ids into `vocab`
    corpus::Vocabulary vocab;    // original minus targets plus their sense tokens
    std::vector<MentionAssignment> assignment_log;  // ordered by position
};

struct AssignConfig {
    int sentence_len = 20;  // consecutive tokens treated as one sentence
};

// E-step: every mention of a target word is relabeled with the sense whose
// vector is closest (cosine) to the mean embedding of the other tokens in its
// chunk; chunks with no usable context get sense 0. `dense_vocab` is the
// vocabulary of `dense` (may differ from `vocab` after earlier splits).
SenseTaggedCorpus assign_senses(const corpus::TokenStream& tokens,
                                const corpus::Vocabulary& vocab,
                                const std::vector<senses::SenseModel>& models,
                                const sgns::DenseEmbedding& dense,
                                const corpus::Vocabulary& dense_vocab, const AssignConfig& cfg);

struct RefineConfig {
    int iterations = 3;
    AssignConfig assign;
    sgns::SgnsConfig sgns;   // M-step trainer settings
    bool warm_start = false; // reuse previous matrices as the M-step init
    uint64_t seed = 1;

    void validate() const;
};

struct IterationLog {
    std::vector<MentionAssignment> assignments;
    double churn = 0.0;  // fraction of mentions that changed sense vs the previous E-step
};

struct RefineResult {
    std::vector<senses::SenseModel> models;
    sgns::DenseEmbedding embedding;   // last M-step output (or the input when iterations == 0)
    corpus::Vocabulary vocabulary;    // vocabulary of `embedding`
    std::vector<IterationLog> iterations;
    SenseTaggedCorpus tagged;         // E-step output of the last iteration
};

// Alternates sense assignment and skip-gram retraining on the relabeled
// corpus. Sense vectors are replaced by the trained vectors of their sense
// tokens; senses with no mentions keep the previous vector and are flagged
// stale.
RefineResult em_refine(const corpus::TokenStream& tokens, const corpus::Vocabulary& vocab,
                       std::vector<senses::SenseModel> models,
                       const sgns::DenseEmbedding& initial_embedding, const RefineConfig& cfg);

}  // namespace wsi::refine
