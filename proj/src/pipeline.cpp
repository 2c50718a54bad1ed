#include "wsi/pipeline.hpp"

#include <omp.h>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "wsi/io.hpp"
#include "wsi/speccluster.hpp"

namespace wsi::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

std::string PipelineConfig::corpus_file() const {
    return corpus_path.empty() ? out_dir + "/corpus.txt" : corpus_path;
}
std::string PipelineConfig::tokens_file() const { return out_dir + "/tokens.txt"; }
std::string PipelineConfig::vocab_file() const { return out_dir + "/vocab.tsv"; }
std::string PipelineConfig::cooc_file() const { return out_dir + "/cooc.tsv"; }
std::string PipelineConfig::dive_file() const { return out_dir + "/dive.emb"; }
std::string PipelineConfig::sgns_file() const { return out_dir + "/sgns.emb"; }
std::string PipelineConfig::senses_file() const { return out_dir + "/senses.json"; }
std::string PipelineConfig::inventory_file() const { return out_dir + "/inventory.tsv"; }
std::string PipelineConfig::refined_senses_file() const { return out_dir + "/senses_refined.json"; }
std::string PipelineConfig::refined_sgns_file() const { return out_dir + "/sgns_refined.emb"; }
std::string PipelineConfig::refined_vocab_file() const { return out_dir + "/vocab_refined.tsv"; }
std::string PipelineConfig::tagged_file() const { return out_dir + "/tagged.txt"; }
std::string PipelineConfig::wcr_queries_file() const {
    return eval.wcr_queries.empty() ? out_dir + "/wcr_queries.tsv" : eval.wcr_queries;
}
std::string PipelineConfig::wcr_report_file() const { return out_dir + "/wcr_report.json"; }
std::string PipelineConfig::pseudo_report_file() const { return out_dir + "/pseudo_report.json"; }

namespace {

template <typename T>
void read_field(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

json dive_to_json(const dive::DiveTrainConfig& c) {
    return {{"dims", c.dims},
            {"k_i", c.k_i},
            {"epochs", c.epochs},
            {"lr_start", c.lr_start},
            {"lr_end", c.lr_end},
            {"negatives", c.negatives},
            {"neg_exponent", c.neg_exponent},
            {"seed", c.seed},
            {"threads", c.threads},
            {"pairs_per_epoch", c.pairs_per_epoch},
            {"init_scale", c.init_scale}};
}

void dive_from_json(const json& j, dive::DiveTrainConfig& c) {
    read_field(j, "dims", c.dims);
    read_field(j, "k_i", c.k_i);
    read_field(j, "epochs", c.epochs);
    read_field(j, "lr_start", c.lr_start);
    read_field(j, "lr_end", c.lr_end);
    read_field(j, "negatives", c.negatives);
    read_field(j, "neg_exponent", c.neg_exponent);
    read_field(j, "seed", c.seed);
    read_field(j, "threads", c.threads);
    read_field(j, "pairs_per_epoch", c.pairs_per_epoch);
    read_field(j, "init_scale", c.init_scale);
}

json sgns_to_json(const sgns::SgnsConfig& c) {
    return {{"dims", c.dims},
            {"window", c.window},
            {"negatives", c.negatives},
            {"neg_exponent", c.neg_exponent},
            {"epochs", c.epochs},
            {"lr_start", c.lr_start},
            {"lr_end", c.lr_end},
            {"seed", c.seed},
            {"threads", c.threads}};
}

void sgns_from_json(const json& j, sgns::SgnsConfig& c) {
    read_field(j, "dims", c.dims);
    read_field(j, "window", c.window);
    read_field(j, "negatives", c.negatives);
    read_field(j, "neg_exponent", c.neg_exponent);
    read_field(j, "epochs", c.epochs);
    read_field(j, "lr_start", c.lr_start);
    read_field(j, "lr_end", c.lr_end);
    read_field(j, "seed", c.seed);
    read_field(j, "threads", c.threads);
}

}  // namespace

std::string config_to_json_text(const PipelineConfig& cfg) {
    json root;
    root["out_dir"] = cfg.out_dir;
    root["corpus_path"] = cfg.corpus_path;
    root["threads"] = cfg.threads;
    root["corpus"] = {{"window", cfg.corpus.window},
                      {"min_count", cfg.corpus.min_count},
                      {"stopwords_path", cfg.corpus.stopwords_path}};
    root["dive"] = dive_to_json(cfg.dive);
    root["sgns"] = sgns_to_json(cfg.sgns);
    root["induce"] = {{"top_n", cfg.induce.top_n},
                      {"topic_top_m", cfg.induce.topic_top_m},
                      {"clusters", cfg.induce.clusters},
                      {"seed", cfg.induce.seed},
                      {"include_query", cfg.induce.include_query},
                      {"dump_ego", cfg.induce.dump_ego}};
    root["refine"] = {{"iterations", cfg.refine.iterations},
                      {"sentence_len", cfg.refine.sentence_len},
                      {"warm_start", cfg.refine.warm_start},
                      {"seed", cfg.refine.seed}};
    root["eval"] = {{"wcr_queries", cfg.eval.wcr_queries},
                    {"pseudo_min_mentions", cfg.eval.pseudo_min_mentions},
                    {"pseudo_seed", cfg.eval.pseudo_seed}};
    root["sample"] = {{"words_per_topic", cfg.sample.words_per_topic},
                      {"shared_words", cfg.sample.shared_words},
                      {"doc_len", cfg.sample.doc_len},
                      {"total_tokens", cfg.sample.total_tokens},
                      {"zipf", cfg.sample.zipf},
                      {"shared_frac", cfg.sample.shared_frac},
                      {"seed", cfg.sample.seed}};
    return root.dump(2) + "\n";
}

PipelineConfig config_from_json_text(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(origin, 0, e.what());
    }
    PipelineConfig cfg;
    try {
        read_field(root, "out_dir", cfg.out_dir);
        read_field(root, "corpus_path", cfg.corpus_path);
        read_field(root, "threads", cfg.threads);
        if (root.contains("corpus")) {
            const auto& j = root.at("corpus");
            read_field(j, "window", cfg.corpus.window);
            read_field(j, "min_count", cfg.corpus.min_count);
            read_field(j, "stopwords_path", cfg.corpus.stopwords_path);
        }
        if (root.contains("dive")) dive_from_json(root.at("dive"), cfg.dive);
        if (root.contains("sgns")) sgns_from_json(root.at("sgns"), cfg.sgns);
        if (root.contains("induce")) {
            const auto& j = root.at("induce");
            read_field(j, "top_n", cfg.induce.top_n);
            read_field(j, "topic_top_m", cfg.induce.topic_top_m);
            read_field(j, "clusters", cfg.induce.clusters);
            read_field(j, "seed", cfg.induce.seed);
            read_field(j, "include_query", cfg.induce.include_query);
            read_field(j, "dump_ego", cfg.induce.dump_ego);
        }
        if (root.contains("refine")) {
            const auto& j = root.at("refine");
            read_field(j, "iterations", cfg.refine.iterations);
            read_field(j, "sentence_len", cfg.refine.sentence_len);
            read_field(j, "warm_start", cfg.refine.warm_start);
            read_field(j, "seed", cfg.refine.seed);
        }
        if (root.contains("eval")) {
            const auto& j = root.at("eval");
            read_field(j, "wcr_queries", cfg.eval.wcr_queries);
            read_field(j, "pseudo_min_mentions", cfg.eval.pseudo_min_mentions);
            read_field(j, "pseudo_seed", cfg.eval.pseudo_seed);
        }
        if (root.contains("sample")) {
            const auto& j = root.at("sample");
            read_field(j, "words_per_topic", cfg.sample.words_per_topic);
            read_field(j, "shared_words", cfg.sample.shared_words);
            read_field(j, "doc_len", cfg.sample.doc_len);
            read_field(j, "total_tokens", cfg.sample.total_tokens);
            read_field(j, "zipf", cfg.sample.zipf);
            read_field(j, "shared_frac", cfg.sample.shared_frac);
            read_field(j, "seed", cfg.sample.seed);
        }
    } catch (const json::exception& e) {
        throw SchemaError(origin, 0, e.what());
    }
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    return config_from_json_text(io::read_file(path), path);
}

namespace {

void require(const std::string& path) {
    if (!fs::exists(path)) {
        throw DependencyError(path);
    }
}

void ensure_out_dir(const PipelineConfig& cfg) { fs::create_directories(cfg.out_dir); }

void write_effective_config(const PipelineConfig& cfg, const std::string& stage) {
    io::write_file(cfg.out_dir + "/" + stage + ".config.json", config_to_json_text(cfg));
}

corpus::TokenizeRules rules_for(const PipelineConfig& cfg) {
    if (cfg.corpus.stopwords_path.empty()) {
        return corpus::TokenizeRules::defaults();
    }
    require(cfg.corpus.stopwords_path);
    corpus::TokenizeRules rules;
    std::istringstream in(io::read_file(cfg.corpus.stopwords_path));
    std::string word;
    while (in >> word) rules.stop_words.insert(word);
    return rules;
}

// Maps ids of `from` onto ids of `to` by word string.
std::vector<WordId> vocab_map(const corpus::Vocabulary& from, const corpus::Vocabulary& to) {
    std::vector<WordId> map(from.size());
    for (size_t w = 0; w < from.size(); ++w) map[w] = to.lookup(from.words[w]);
    return map;
}

Matrix embedding_for_vocab(const io::LoadedEmbedding& emb, const corpus::Vocabulary& vocab,
                           const std::string& path) {
    if (emb.words.size() != vocab.size()) {
        throw SchemaError(path, 0, "embedding vocabulary size does not match vocab.tsv");
    }
    Matrix out(emb.vecs.rows(), emb.vecs.cols());
    for (size_t i = 0; i < emb.words.size(); ++i) {
        WordId id = vocab.lookup(emb.words[i]);
        if (id == kNoWord) {
            throw SchemaError(path, 0, "embedding word '" + emb.words[i] + "' not in vocabulary");
        }
        out.row(id) = emb.vecs.row(static_cast<Eigen::Index>(i));
    }
    return out;
}

}  // namespace

senses::SenseModel induce_word(const InductionContext& ctx, WordId query) {
    egograph::FeatureConfig fcfg;
    fcfg.top_n = ctx.params.top_n;
    fcfg.include_query = ctx.params.include_query;
    egograph::EgoNetwork net =
        egograph::build_ego_network(*ctx.dive_words, *ctx.cache, query, fcfg);
    speccluster::ClusterAssignment assignment = speccluster::spectral_cluster(
        net.adjacency, ctx.params.clusters, ctx.params.seed + static_cast<uint64_t>(query));
    return senses::sense_embeddings(*ctx.dive_words, ctx.topic_vecs == nullptr
                                                         ? std::vector<Vector>()
                                                         : *ctx.topic_vecs,
                                    assignment, net, ctx.vocab->words[static_cast<size_t>(query)]);
}

void stage_gen_corpus(const PipelineConfig& cfg) {
    ensure_out_dir(cfg);
    corpus::TokenizedText text = synth::topic_corpus(cfg.sample);
    std::ostringstream out;
    for (size_t d = 0; d < text.docs(); ++d) {
        auto [lo, hi] = text.doc_range(d);
        for (size_t i = lo; i < hi; ++i) {
            if (i > lo) out << ' ';
            out << text.tokens[i];
        }
        out << "\n\n";
    }
    io::write_file(cfg.corpus_file(), out.str());
    write_effective_config(cfg, "gen-corpus");
}

void stage_ingest(const PipelineConfig& cfg) {
    require(cfg.corpus_file());
    ensure_out_dir(cfg);
    corpus::TokenizedText text = corpus::tokenize(io::read_file(cfg.corpus_file()), rules_for(cfg));
    corpus::Vocabulary vocab = corpus::build_vocabulary(text.tokens, cfg.corpus.min_count);
    io::save_tokens(cfg.tokens_file(), text);
    io::save_vocabulary(cfg.vocab_file(), vocab);
    write_effective_config(cfg, "ingest");
}

void stage_cooc(const PipelineConfig& cfg) {
    require(cfg.tokens_file());
    require(cfg.vocab_file());
    corpus::Vocabulary vocab = io::load_vocabulary(cfg.vocab_file());
    corpus::TokenStream stream = corpus::to_ids(io::load_tokens(cfg.tokens_file()), vocab);
    corpus::CooccurrenceTable table =
        corpus::count_cooccurrences(stream, vocab.size(), cfg.corpus.window, cfg.threads);
    io::save_cooccurrence(cfg.cooc_file(), table, vocab);
    write_effective_config(cfg, "cooc");
}

void stage_train_dive(const PipelineConfig& cfg) {
    require(cfg.cooc_file());
    require(cfg.vocab_file());
    corpus::Vocabulary vocab = io::load_vocabulary(cfg.vocab_file());
    corpus::CooccurrenceTable table = io::load_cooccurrence(cfg.cooc_file(), vocab);
    dive::DiveEmbedding emb = dive::train_dive(table, cfg.dive);
    io::save_embedding(cfg.dive_file(), emb.word_vecs, vocab.words);
    write_effective_config(cfg, "train-dive");
}

void stage_train_sgns(const PipelineConfig& cfg) {
    require(cfg.tokens_file());
    require(cfg.vocab_file());
    corpus::Vocabulary vocab = io::load_vocabulary(cfg.vocab_file());
    corpus::TokenStream stream = corpus::to_ids(io::load_tokens(cfg.tokens_file()), vocab);
    sgns::DenseEmbedding emb = sgns::train_sgns(stream, vocab.freq, cfg.sgns);
    io::save_embedding(cfg.sgns_file(), emb.word_vecs, vocab.words);
    write_effective_config(cfg, "train-sgns");
}

void stage_induce(const PipelineConfig& cfg, const std::vector<std::string>& words,
                  bool all_words) {
    require(cfg.dive_file());
    require(cfg.sgns_file());
    require(cfg.vocab_file());
    corpus::Vocabulary vocab = io::load_vocabulary(cfg.vocab_file());
    Matrix dive_words = embedding_for_vocab(io::load_embedding(cfg.dive_file()), vocab,
                                            cfg.dive_file());
    io::LoadedEmbedding dense_raw = io::load_embedding(cfg.sgns_file());

    corpus::Vocabulary dense_vocab;
    dense_vocab.words = dense_raw.words;
    dense_vocab.freq.assign(dense_raw.words.size(), 1);
    dense_vocab.reindex();
    sgns::DenseEmbedding dense;
    dense.word_vecs = dense_raw.vecs;

    std::vector<WordId> queries;
    if (all_words) {
        queries.resize(vocab.size());
        for (size_t i = 0; i < vocab.size(); ++i) queries[i] = static_cast<WordId>(i);
    } else {
        for (const auto& w : words) {
            WordId id = vocab.lookup(w);
            if (id == kNoWord) {
                throw ContractError("induce: word '" + w + "' is not in the vocabulary");
            }
            queries.push_back(id);
        }
    }
    if (queries.empty()) {
        throw ContractError("induce: no query words given");
    }

    int cache_size = std::max(cfg.induce.top_n + 1, cfg.induce.topic_top_m);
    egograph::TopWordsCache cache = egograph::TopWordsCache::build(dive_words, cache_size,
                                                                   cfg.threads);
    std::vector<WordId> to_dense = vocab_map(vocab, dense_vocab);
    std::vector<senses::TopicEmbedding> topics = senses::all_topic_embeddings(
        dive_words, cache, dense, to_dense, cfg.induce.topic_top_m, cfg.threads);
    std::vector<Vector> topic_vecs(topics.size());
    for (auto& t : topics) topic_vecs[static_cast<size_t>(t.basis)] = t.vec;

    InductionContext ctx;
    ctx.dive_words = &dive_words;
    ctx.cache = &cache;
    ctx.topic_vecs = &topic_vecs;
    ctx.vocab = &vocab;
    ctx.params = cfg.induce;

    std::vector<senses::SenseModel> models(queries.size());
    std::vector<std::string> failures(queries.size());
    std::vector<bool> dead(queries.size(), false);
#pragma omp parallel for num_threads(std::max(1, cfg.threads)) schedule(dynamic)
    for (size_t i = 0; i < queries.size(); ++i) {
        try {
            models[i] = induce_word(ctx, queries[i]);
        } catch (const NoSensesError& e) {
            dead[i] = true;
            failures[i] = e.what();
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    }
    std::vector<senses::SenseModel> kept;
    for (size_t i = 0; i < queries.size(); ++i) {
        const std::string& word = vocab.words[static_cast<size_t>(queries[i])];
        if (dead[i]) {
            // Zero rows carry no senses; tolerated when sweeping the whole
            // vocabulary, an error for an explicitly requested word.
            if (!all_words) {
                throw ContractError("induce failed for '" + word + "': " + failures[i]);
            }
            std::cerr << "[induce] skipping '" << word << "': all-zero embedding row\n";
            continue;
        }
        if (models[i].word.empty() && !failures[i].empty()) {
            throw ContractError("induce failed for '" + word + "': " + failures[i]);
        }
        kept.push_back(std::move(models[i]));
    }
    models = std::move(kept);

    io::save_sense_models(cfg.senses_file(), models);
    io::save_inventory(cfg.inventory_file(), models, dive_words, vocab);
    if (cfg.induce.dump_ego) {
        egograph::FeatureConfig fcfg;
        fcfg.top_n = cfg.induce.top_n;
        fcfg.include_query = cfg.induce.include_query;
        for (size_t i = 0; i < queries.size(); ++i) {
            if (dead[i]) continue;
            WordId q = queries[i];
            egograph::EgoNetwork net = egograph::build_ego_network(dive_words, cache, q, fcfg);
            io::save_ego_network(cfg.out_dir + "/ego_" + vocab.words[static_cast<size_t>(q)] +
                                     ".json",
                                 net, vocab.words[static_cast<size_t>(q)]);
        }
    }
    write_effective_config(cfg, "induce");
}

namespace {

refine::RefineConfig refine_config(const PipelineConfig& cfg) {
    refine::RefineConfig rcfg;
    rcfg.iterations = cfg.refine.iterations;
    rcfg.assign.sentence_len = cfg.refine.sentence_len;
    rcfg.sgns = cfg.sgns;
    rcfg.warm_start = cfg.refine.warm_start;
    rcfg.seed = cfg.refine.seed;
    return rcfg;
}

json refine_iterations_json(const refine::RefineResult& result,
                            const std::vector<std::pair<size_t, int>>* gold) {
    json iters = json::array();
    for (size_t i = 0; i < result.iterations.size(); ++i) {
        json entry = {{"iteration", i},
                      {"mentions", result.iterations[i].assignments.size()},
                      {"churn", result.iterations[i].churn}};
        if (gold != nullptr) {
            std::vector<std::pair<size_t, int>> assignments;
            for (const auto& a : result.iterations[i].assignments) {
                assignments.emplace_back(a.position, a.sense);
            }
            eval::PurityReport purity = eval::pseudoword_purity(assignments, *gold);
            entry["purity"] = purity.purity;
            entry["adjusted_rand"] = purity.adjusted_rand;
        }
        iters.push_back(std::move(entry));
    }
    return iters;
}

}  // namespace

void stage_refine(const PipelineConfig& cfg) {
    require(cfg.tokens_file());
    require(cfg.vocab_file());
    require(cfg.senses_file());
    require(cfg.sgns_file());
    corpus::Vocabulary vocab = io::load_vocabulary(cfg.vocab_file());
    corpus::TokenStream stream = corpus::to_ids(io::load_tokens(cfg.tokens_file()), vocab);
    std::vector<senses::SenseModel> models = io::load_sense_models(cfg.senses_file());
    Matrix dense = embedding_for_vocab(io::load_embedding(cfg.sgns_file()), vocab,
                                       cfg.sgns_file());
    sgns::DenseEmbedding emb;
    emb.word_vecs = dense;
    emb.ctx_vecs = Matrix::Zero(dense.rows(), dense.cols());

    refine::RefineResult result =
        refine::em_refine(stream, vocab, std::move(models), emb, refine_config(cfg));

    io::save_sense_models(cfg.refined_senses_file(), result.models);
    io::save_embedding(cfg.refined_sgns_file(), result.embedding.word_vecs,
                       result.vocabulary.words);
    io::save_vocabulary(cfg.refined_vocab_file(), result.vocabulary);
    if (!result.tagged.tokens.ids.empty()) {
        io::save_tagged_corpus(cfg.tagged_file(), result.tagged, cfg.refine.sentence_len);
    }
    json report = {{"iterations", refine_iterations_json(result, nullptr)}};
    io::write_file(cfg.out_dir + "/refine_report.json", report.dump(2) + "\n");
    write_effective_config(cfg, "refine");
}

namespace {

// Loads refined artifacts when they exist, initial ones otherwise.
void load_eval_models(const PipelineConfig& cfg, eval::SenseModelMap& models,
                      corpus::Vocabulary& vocab, sgns::DenseEmbedding& emb) {
    std::string senses_path =
        fs::exists(cfg.refined_senses_file()) ? cfg.refined_senses_file() : cfg.senses_file();
    std::string emb_path =
        fs::exists(cfg.refined_sgns_file()) ? cfg.refined_sgns_file() : cfg.sgns_file();
    require(senses_path);
    require(emb_path);
    io::LoadedEmbedding raw = io::load_embedding(emb_path);
    vocab.words = raw.words;
    vocab.freq.assign(raw.words.size(), 1);
    vocab.reindex();
    emb.word_vecs = raw.vecs;
    for (auto& m : io::load_sense_models(senses_path)) {
        models.emplace(m.word, std::move(m));
    }
}

}  // namespace

void stage_eval_wcr(const PipelineConfig& cfg, int synthesize) {
    eval::SenseModelMap models;
    corpus::Vocabulary dense_vocab;
    sgns::DenseEmbedding emb;
    load_eval_models(cfg, models, dense_vocab, emb);

    if (synthesize > 0) {
        require(cfg.dive_file());
        require(cfg.vocab_file());
        corpus::Vocabulary vocab = io::load_vocabulary(cfg.vocab_file());
        Matrix dive_words = embedding_for_vocab(io::load_embedding(cfg.dive_file()), vocab,
                                                cfg.dive_file());
        std::vector<senses::SenseModel> list;
        for (auto& [word, m] : models) list.push_back(m);
        std::vector<eval::WcrQuery> queries = synth::make_wcr_queries(
            list, dive_words, vocab, synthesize, cfg.eval.pseudo_seed);
        io::save_wcr_queries(cfg.wcr_queries_file(), queries);
    }
    require(cfg.wcr_queries_file());
    std::vector<eval::WcrQuery> queries = io::load_wcr_queries(cfg.wcr_queries_file());
    eval::EmbeddingView view{&emb, &dense_vocab};
    eval::EvalReport report = eval::wcr_precision_at_1(models, view, queries);
    io::save_eval_report(cfg.wcr_report_file(), report);
    write_effective_config(cfg, "eval-wcr");
}

PseudoReport run_pseudoword_experiment(const corpus::TokenStream& tokens,
                                       const corpus::Vocabulary& vocab, const std::string& word_a,
                                       const std::string& word_b, const PipelineConfig& cfg,
                                       uint64_t seed) {
    eval::PseudowordTask task = eval::make_pseudoword_task(tokens, vocab, word_a, word_b,
                                                           "pseudoword",
                                                           cfg.eval.pseudo_min_mentions);
    WordId pseudo_id = task.vocab.lookup(task.pseudo);

    corpus::CooccurrenceTable table =
        corpus::count_cooccurrences(task.tokens, task.vocab.size(), cfg.corpus.window,
                                    cfg.threads);
    dive::DiveTrainConfig dcfg = cfg.dive;
    dcfg.seed = seed;
    dive::DiveEmbedding dive_emb = dive::train_dive(table, dcfg);

    sgns::SgnsConfig scfg = cfg.sgns;
    scfg.seed = seed + 1;
    sgns::DenseEmbedding dense = sgns::train_sgns(task.tokens, task.vocab.freq, scfg);

    int cache_size = std::max(cfg.induce.top_n + 1, cfg.induce.topic_top_m);
    egograph::TopWordsCache cache =
        egograph::TopWordsCache::build(dive_emb.word_vecs, cache_size, cfg.threads);
    std::vector<WordId> identity(task.vocab.size());
    for (size_t i = 0; i < identity.size(); ++i) identity[i] = static_cast<WordId>(i);
    std::vector<senses::TopicEmbedding> topics = senses::all_topic_embeddings(
        dive_emb.word_vecs, cache, dense, identity, cfg.induce.topic_top_m, cfg.threads);
    std::vector<Vector> topic_vecs(topics.size());
    for (auto& t : topics) topic_vecs[static_cast<size_t>(t.basis)] = t.vec;

    InductionContext ctx;
    ctx.dive_words = &dive_emb.word_vecs;
    ctx.cache = &cache;
    ctx.topic_vecs = &topic_vecs;
    ctx.vocab = &task.vocab;
    ctx.params = cfg.induce;
    ctx.params.seed = seed + 2;
    std::vector<senses::SenseModel> models = {induce_word(ctx, pseudo_id)};

    refine::RefineConfig rcfg = refine_config(cfg);
    rcfg.seed = seed + 3;
    refine::RefineResult result =
        refine::em_refine(task.tokens, task.vocab, std::move(models), dense, rcfg);

    PseudoReport report;
    report.senses = static_cast<int>(result.models.front().sense_vecs.size());
    for (const auto& iter : result.iterations) {
        std::vector<std::pair<size_t, int>> assignments;
        for (const auto& a : iter.assignments) assignments.emplace_back(a.position, a.sense);
        eval::PurityReport purity = eval::pseudoword_purity(assignments, task.gold);
        report.purity.push_back(purity.purity);
        report.churn.push_back(iter.churn);
        report.final_ari = purity.adjusted_rand;
    }
    return report;
}

void stage_eval_pseudo(const PipelineConfig& cfg, const std::string& word_a,
                       const std::string& word_b) {
    require(cfg.tokens_file());
    require(cfg.vocab_file());
    corpus::Vocabulary vocab = io::load_vocabulary(cfg.vocab_file());
    corpus::TokenStream stream = corpus::to_ids(io::load_tokens(cfg.tokens_file()), vocab);
    PseudoReport report =
        run_pseudoword_experiment(stream, vocab, word_a, word_b, cfg, cfg.eval.pseudo_seed);
    json root = {{"word_a", word_a},
                 {"word_b", word_b},
                 {"senses", report.senses},
                 {"purity", report.purity},
                 {"churn", report.churn},
                 {"adjusted_rand", report.final_ari}};
    io::write_file(cfg.pseudo_report_file(), root.dump(2) + "\n");
    write_effective_config(cfg, "eval-pseudo");
}

void stage_inspect(const PipelineConfig& cfg, const std::string& word, std::ostream& out) {
    require(cfg.dive_file());
    require(cfg.vocab_file());
    require(cfg.senses_file());
    corpus::Vocabulary vocab = io::load_vocabulary(cfg.vocab_file());
    Matrix dive_words = embedding_for_vocab(io::load_embedding(cfg.dive_file()), vocab,
                                            cfg.dive_file());
    std::vector<senses::SenseModel> models = io::load_sense_models(cfg.senses_file());
    const senses::SenseModel* model = nullptr;
    for (const auto& m : models) {
        if (m.word == word) {
            model = &m;
            break;
        }
    }
    if (model == nullptr) {
        throw DependencyError("sense model for '" + word + "' (run induce first)");
    }

    out << "word: " << word << "\n";
    for (size_t k = 0; k < model->clusters.size(); ++k) {
        out << "sense " << k + 1 << "\n";
        const auto& cluster = model->clusters[k];
        // Top bases by relevance, top words per basis.
        std::vector<size_t> order(cluster.bases.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            if (cluster.relevance[a] != cluster.relevance[b])
                return cluster.relevance[a] > cluster.relevance[b];
            return cluster.bases[a] < cluster.bases[b];
        });
        size_t show = std::min<size_t>(2, order.size());
        for (size_t i = 0; i < show; ++i) {
            int basis = cluster.bases[order[i]];
            out << "  basis " << basis << " (w=";
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.4g", cluster.relevance[order[i]]);
            out << buf << "): ";
            auto top = egograph::top_words(dive_words, basis,
                                           std::min<int>(5, static_cast<int>(vocab.size())));
            for (size_t j = 0; j < top.size(); ++j) {
                if (j > 0) out << ", ";
                out << vocab.words[static_cast<size_t>(top[j])];
            }
            out << "\n";
        }
    }
}

}  // namespace wsi::pipeline
