#include "wsi/refine.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace wsi::refine {

namespace {
constexpr char kSeparator = '_';
}

std::string sense_token(const std::string& word, int sense) {
    std::string out;
    out.reserve(word.size() + 4);
    for (char ch : word) {
        out.push_back(ch);
        if (ch == kSeparator) out.push_back(kSeparator);  // escape
    }
    out.push_back(kSeparator);
    out += std::to_string(sense);
    return out;
}

std::string strip_sense_token(const std::string& token) {
    // A sense token ends in separator + digits where the separator is not
    // itself escaped (preceded by an even number of separators).
    size_t i = token.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(token[i - 1]))) --i;
    if (i == token.size() || i == 0 || token[i - 1] != kSeparator) return token;
    size_t seps = 0;
    size_t j = i;
    while (j > 0 && token[j - 1] == kSeparator) {
        ++seps;
        --j;
    }
    if (seps % 2 == 0) return token;  // escaped separator, not a suffix
    std::string body = token.substr(0, i - 1);
    std::string out;
    out.reserve(body.size());
    for (size_t p = 0; p < body.size(); ++p) {
        out.push_back(body[p]);
        if (body[p] == kSeparator) ++p;  // collapse escaped pair
    }
    return out;
}

SenseTaggedCorpus assign_senses(const corpus::TokenStream& tokens,
                                const corpus::Vocabulary& vocab,
                                const std::vector<senses::SenseModel>& models,
                                const sgns::DenseEmbedding& dense,
                                const corpus::Vocabulary& dense_vocab, const AssignConfig& cfg) {
    if (cfg.sentence_len < 1) {
        throw ContractError("assign_senses: sentence_len must be >= 1");
    }
    for (const auto& m : models) {
        if (m.sense_vecs.empty()) {
            throw ContractError("assign_senses: target '" + m.word + "' has no sense vectors");
        }
    }

    // Original word id -> target index, and -> dense row for context lookups.
    std::unordered_map<WordId, size_t> target_of;
    for (size_t t = 0; t < models.size(); ++t) {
        WordId id = vocab.lookup(models[t].word);
        if (id == kNoWord) {
            throw ContractError("assign_senses: target '" + models[t].word +
                                "' is not in the vocabulary");
        }
        target_of[id] = t;
    }
    std::vector<WordId> to_dense(vocab.size());
    for (size_t w = 0; w < vocab.size(); ++w) {
        to_dense[w] = dense_vocab.lookup(vocab.words[w]);
    }

    SenseTaggedCorpus out;
    out.tokens.doc_offsets = tokens.doc_offsets;
    const size_t n = tokens.ids.size();
    const size_t chunk_len = static_cast<size_t>(cfg.sentence_len);

    // Pass 1: assign a sense to every target mention, chunk by chunk.
    std::vector<int> mention_sense(n, -1);
    Vector context(dense.dims());
    for (size_t chunk_lo = 0; chunk_lo < n; chunk_lo += chunk_len) {
        size_t chunk_hi = std::min(n, chunk_lo + chunk_len);
        for (size_t i = chunk_lo; i < chunk_hi; ++i) {
            WordId w = tokens.ids[i];
            if (w == kNoWord) continue;
            auto it = target_of.find(w);
            if (it == target_of.end()) continue;
            const auto& model = models[it->second];

            context.setZero();
            size_t used = 0;
            for (size_t j = chunk_lo; j < chunk_hi; ++j) {
                if (j == i) continue;
                WordId cj = tokens.ids[j];
                if (cj == kNoWord) continue;
                WordId row = to_dense[static_cast<size_t>(cj)];
                if (row == kNoWord) continue;
                context += dense.word_vecs.row(row).transpose();
                ++used;
            }
            int sense = 0;
            if (used > 0) {
                double best = -2.0;
                for (size_t k = 0; k < model.sense_vecs.size(); ++k) {
                    double c = cosine(model.sense_vecs[k], context);
                    if (c > best) {
                        best = c;
                        sense = static_cast<int>(k);
                    }
                }
            }
            mention_sense[i] = sense;
            out.assignment_log.push_back({i, sense});
        }
    }

    // Pass 2: rebuild the vocabulary (targets replaced by their sense tokens)
    // and rewrite the stream.
    std::vector<int64_t> sense_counts;  // per (target, sense), flattened
    std::vector<size_t> sense_base(models.size() + 1, 0);
    for (size_t t = 0; t < models.size(); ++t) {
        sense_base[t + 1] = sense_base[t] + models[t].sense_vecs.size();
    }
    sense_counts.assign(sense_base.back(), 0);
    for (const auto& log : out.assignment_log) {
        size_t t = target_of.at(tokens.ids[log.position]);
        ++sense_counts[sense_base[t] + static_cast<size_t>(log.sense)];
    }

    std::vector<std::pair<std::string, int64_t>> entries;
    entries.reserve(vocab.size() + sense_counts.size());
    for (size_t w = 0; w < vocab.size(); ++w) {
        if (target_of.count(static_cast<WordId>(w))) continue;
        entries.emplace_back(vocab.words[w], vocab.freq[w]);
    }
    for (size_t t = 0; t < models.size(); ++t) {
        for (size_t k = 0; k < models[t].sense_vecs.size(); ++k) {
            int64_t c = sense_counts[sense_base[t] + k];
            if (c > 0) {
                std::string token = sense_token(models[t].word, static_cast<int>(k));
                if (vocab.contains(token)) {
                    throw ContractError("assign_senses: sense token '" + token +
                                        "' collides with an existing word");
                }
                entries.emplace_back(std::move(token), c);
            }
        }
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    out.vocab.min_count = 1;
    for (auto& [w, c] : entries) {
        out.vocab.words.push_back(w);
        out.vocab.freq.push_back(c);
    }
    out.vocab.reindex();

    std::vector<WordId> remap(vocab.size());
    for (size_t w = 0; w < vocab.size(); ++w) {
        remap[w] = out.vocab.lookup(vocab.words[w]);  // kNoWord for targets
    }
    std::vector<std::vector<WordId>> sense_ids(models.size());
    for (size_t t = 0; t < models.size(); ++t) {
        for (size_t k = 0; k < models[t].sense_vecs.size(); ++k) {
            sense_ids[t].push_back(out.vocab.lookup(sense_token(models[t].word, static_cast<int>(k))));
        }
    }

    out.tokens.ids.resize(n);
    for (size_t i = 0; i < n; ++i) {
        WordId w = tokens.ids[i];
        if (w == kNoWord) {
            out.tokens.ids[i] = kNoWord;
        } else if (mention_sense[i] >= 0) {
            out.tokens.ids[i] = sense_ids[target_of.at(w)][static_cast<size_t>(mention_sense[i])];
        } else {
            out.tokens.ids[i] = remap[static_cast<size_t>(w)];
        }
    }
    return out;
}

void RefineConfig::validate() const {
    if (iterations < 0) throw ContractError("refine: iterations must be >= 0");
    if (assign.sentence_len < 1) throw ContractError("refine: sentence_len must be >= 1");
    sgns.validate();
}

RefineResult em_refine(const corpus::TokenStream& tokens, const corpus::Vocabulary& vocab,
                       std::vector<senses::SenseModel> models,
                       const sgns::DenseEmbedding& initial_embedding, const RefineConfig& cfg) {
    cfg.validate();
    RefineResult result;
    result.embedding = initial_embedding;
    result.vocabulary = vocab;
    if (cfg.iterations == 0) {
        result.models = std::move(models);
        return result;
    }

    std::vector<int> previous;  // previous sense per mention, aligned with the log
    for (int iter = 0; iter < cfg.iterations; ++iter) {
        SenseTaggedCorpus tagged = assign_senses(tokens, vocab, models, result.embedding,
                                                 result.vocabulary, cfg.assign);
        IterationLog log;
        log.assignments = tagged.assignment_log;
        if (!previous.empty() && previous.size() == log.assignments.size()) {
            size_t changed = 0;
            for (size_t i = 0; i < previous.size(); ++i) {
                if (previous[i] != log.assignments[i].sense) ++changed;
            }
            log.churn = static_cast<double>(changed) / static_cast<double>(previous.size());
        }
        previous.clear();
        for (const auto& a : log.assignments) previous.push_back(a.sense);
        result.iterations.push_back(log);

        sgns::SgnsConfig mcfg = cfg.sgns;
        mcfg.seed = cfg.seed + static_cast<uint64_t>(iter);
        sgns::DenseEmbedding trained;
        if (cfg.warm_start) {
            // Rows of words present in the current embedding's vocabulary
            // carry over; everything else starts from the cold init.
            std::vector<WordId> warm_rows(tagged.vocab.size());
            for (size_t w = 0; w < tagged.vocab.size(); ++w) {
                warm_rows[w] = result.vocabulary.lookup(tagged.vocab.words[w]);
            }
            trained = sgns::train_sgns_warm(tagged.tokens, tagged.vocab.freq, mcfg,
                                            result.embedding, warm_rows);
        } else {
            trained = sgns::train_sgns(tagged.tokens, tagged.vocab.freq, mcfg);
        }

        for (auto& model : models) {
            for (size_t k = 0; k < model.sense_vecs.size(); ++k) {
                WordId row = tagged.vocab.lookup(sense_token(model.word, static_cast<int>(k)));
                if (row == kNoWord) {
                    model.stale[k] = true;
                } else {
                    model.sense_vecs[k] = trained.word_vecs.row(row).transpose();
                    model.stale[k] = false;
                }
            }
            model.provenance = senses::SenseModel::Provenance::refined;
        }
        result.embedding = std::move(trained);
        result.vocabulary = tagged.vocab;
        result.tagged = std::move(tagged);
    }
    result.models = std::move(models);
    return result;
}

}  // namespace wsi::refine
