#include "wsi/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wsi::eval {

const Vector* EmbeddingView::lookup(const std::string& word, Vector& scratch) const {
    if (emb == nullptr || vocab == nullptr) return nullptr;
    WordId id = vocab->lookup(word);
    if (id == kNoWord) return nullptr;
    scratch = emb->word_vecs.row(id).transpose();
    return &scratch;
}

double target_context_similarity(const SenseModelMap& models, const EmbeddingView& fallback,
                                 const std::string& target,
                                 const std::vector<std::string>& context_words) {
    auto it = models.find(target);
    if (it == models.end() || it->second.sense_vecs.empty()) {
        throw ContractError("target_context_similarity: no sense model for '" + target + "'");
    }
    const auto& target_senses = it->second.sense_vecs;

    double best = -std::numeric_limits<double>::infinity();
    bool any_usable = false;
    Vector scratch;
    for (const auto& s_k : target_senses) {
        Vector acc = Vector::Zero(s_k.size());
        size_t used = 0;
        for (const auto& cw : context_words) {
            const Vector* vec = nullptr;
            auto cit = models.find(cw);
            if (cit != models.end() && !cit->second.sense_vecs.empty()) {
                // Pick the context word's sense closest to this target sense.
                double best_cos = -std::numeric_limits<double>::infinity();
                for (const auto& sv : cit->second.sense_vecs) {
                    double c = cosine(sv, s_k);
                    if (c > best_cos) {
                        best_cos = c;
                        vec = &sv;
                    }
                }
            } else {
                vec = fallback.lookup(cw, scratch);
            }
            if (vec == nullptr || vec->size() != acc.size()) continue;
            acc += *vec;
            ++used;
        }
        if (used == 0) continue;
        any_usable = true;
        best = std::max(best, cosine(s_k, acc / static_cast<double>(used)));
    }
    if (!any_usable) {
        throw EmptyContextError("target_context_similarity: no usable context word for '" +
                                target + "'");
    }
    return best;
}

void WcrQuery::validate() const {
    if (false_contexts.size() != 10) {
        throw ContractError("wcr query for '" + target + "' must have exactly 10 false contexts");
    }
    if (true_context.empty()) {
        throw ContractError("wcr query for '" + target + "' has an empty true context");
    }
    for (const auto& fc : false_contexts) {
        if (fc.empty()) {
            throw ContractError("wcr query for '" + target + "' has an empty false context");
        }
    }
}

EvalReport wcr_precision_at_1(const SenseModelMap& models, const EmbeddingView& fallback,
                              const std::vector<WcrQuery>& queries) {
    EvalReport report;
    report.metric = "wcr_precision_at_1";
    constexpr double kUnusable = -std::numeric_limits<double>::infinity();
    for (const auto& q : queries) {
        q.validate();
        auto similarity = [&](const std::vector<std::string>& ctx) {
            try {
                return target_context_similarity(models, fallback, q.target, ctx);
            } catch (const EmptyContextError&) {
                return kUnusable;
            }
        };
        QueryResult r;
        r.target = q.target;
        r.true_similarity = similarity(q.true_context);
        r.best_false_similarity = kUnusable;
        for (const auto& fc : q.false_contexts) {
            r.best_false_similarity = std::max(r.best_false_similarity, similarity(fc));
        }
        r.correct = r.true_similarity > r.best_false_similarity;  // ties fail
        report.per_query.push_back(std::move(r));
    }
    if (!report.per_query.empty()) {
        size_t hits = 0;
        for (const auto& r : report.per_query) hits += r.correct ? 1 : 0;
        report.value = static_cast<double>(hits) / static_cast<double>(report.per_query.size());
    }
    return report;
}

PseudowordTask make_pseudoword_task(const corpus::TokenStream& tokens,
                                    const corpus::Vocabulary& vocab, const std::string& word_a,
                                    const std::string& word_b, const std::string& pseudo,
                                    int64_t min_mentions) {
    if (word_a == word_b) {
        throw ContractError("make_pseudoword_task: the two words must differ");
    }
    WordId id_a = vocab.lookup(word_a);
    WordId id_b = vocab.lookup(word_b);
    if (id_a == kNoWord || id_b == kNoWord) {
        throw ContractError("make_pseudoword_task: both words must be in the vocabulary");
    }
    if (vocab.contains(pseudo)) {
        throw ContractError("make_pseudoword_task: pseudoword '" + pseudo +
                            "' already exists in the vocabulary");
    }
    int64_t mentions_a = 0;
    int64_t mentions_b = 0;
    for (WordId id : tokens.ids) {
        if (id == id_a) ++mentions_a;
        if (id == id_b) ++mentions_b;
    }
    if (mentions_a < min_mentions || mentions_b < min_mentions) {
        throw ContractError("make_pseudoword_task: need at least " + std::to_string(min_mentions) +
                            " mentions of each word (found " + std::to_string(mentions_a) + " / " +
                            std::to_string(mentions_b) + ")");
    }

    PseudowordTask task;
    task.pseudo = pseudo;
    std::vector<std::pair<std::string, int64_t>> entries;
    for (size_t w = 0; w < vocab.size(); ++w) {
        if (static_cast<WordId>(w) == id_a || static_cast<WordId>(w) == id_b) continue;
        entries.emplace_back(vocab.words[w], vocab.freq[w]);
    }
    entries.emplace_back(pseudo, vocab.freq[static_cast<size_t>(id_a)] +
                                     vocab.freq[static_cast<size_t>(id_b)]);
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    task.vocab.min_count = vocab.min_count;
    for (auto& [w, c] : entries) {
        task.vocab.words.push_back(w);
        task.vocab.freq.push_back(c);
    }
    task.vocab.reindex();

    std::vector<WordId> remap(vocab.size());
    for (size_t w = 0; w < vocab.size(); ++w) remap[w] = task.vocab.lookup(vocab.words[w]);
    WordId pseudo_id = task.vocab.lookup(pseudo);

    task.tokens.doc_offsets = tokens.doc_offsets;
    task.tokens.ids.resize(tokens.ids.size());
    for (size_t i = 0; i < tokens.ids.size(); ++i) {
        WordId id = tokens.ids[i];
        if (id == id_a || id == id_b) {
            task.tokens.ids[i] = pseudo_id;
            task.gold.emplace_back(i, id == id_a ? 0 : 1);
        } else {
            task.tokens.ids[i] = id == kNoWord ? kNoWord : remap[static_cast<size_t>(id)];
        }
    }
    return task;
}

PurityReport pseudoword_purity(const std::vector<std::pair<size_t, int>>& assignments,
                               const std::vector<std::pair<size_t, int>>& gold) {
    if (assignments.size() != gold.size()) {
        throw ContractError("pseudoword_purity: assignment/gold size mismatch");
    }
    std::map<size_t, int> gold_at(gold.begin(), gold.end());
    // Contingency table cluster x label.
    std::map<std::pair<int, int>, size_t> cell;
    std::map<int, size_t> per_cluster;
    std::map<int, size_t> per_label;
    for (const auto& [pos, cluster] : assignments) {
        auto it = gold_at.find(pos);
        if (it == gold_at.end()) {
            throw ContractError("pseudoword_purity: assignment at position " +
                                std::to_string(pos) + " has no gold label");
        }
        ++cell[{cluster, it->second}];
        ++per_cluster[cluster];
        ++per_label[it->second];
    }

    PurityReport report;
    report.mentions = assignments.size();
    if (report.mentions == 0) return report;

    std::map<int, size_t> majority;
    for (const auto& [key, n] : cell) {
        majority[key.first] = std::max(majority[key.first], n);
    }
    size_t agree = 0;
    for (const auto& [cluster, n] : majority) agree += n;
    report.purity = static_cast<double>(agree) / static_cast<double>(report.mentions);

    // Adjusted Rand index.
    auto choose2 = [](size_t n) { return static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0; };
    double sum_cells = 0.0;
    for (const auto& [key, n] : cell) sum_cells += choose2(n);
    double sum_rows = 0.0;
    for (const auto& [c, n] : per_cluster) sum_rows += choose2(n);
    double sum_cols = 0.0;
    for (const auto& [l, n] : per_label) sum_cols += choose2(n);
    double total = choose2(report.mentions);
    double expected = sum_rows * sum_cols / total;
    double max_index = 0.5 * (sum_rows + sum_cols);
    double denom = max_index - expected;
    report.adjusted_rand = denom == 0.0 ? 1.0 : (sum_cells - expected) / denom;
    return report;
}

}  // namespace wsi::eval
