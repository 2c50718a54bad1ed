#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "wsi/pipeline.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDependency = 3;
constexpr int kExitRuntime = 4;

}  // namespace

int main(int argc, char** argv) {
    wsi::pipeline::PipelineConfig cfg;

    // --config is applied before flag overrides, so flags always win.
    for (int i = 1; i < argc - 1; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                cfg = wsi::pipeline::load_config(argv[i + 1]);
            } catch (const wsi::DependencyError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitDependency;
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitRuntime;
            }
        }
    }

    CLI::App app{"Graph-based word sense induction over non-negative embedding bases"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its values");
    app.add_option("--out", cfg.out_dir, "Output directory for artifacts")
        ->capture_default_str();
    app.add_option("--corpus", cfg.corpus_path, "Raw text corpus path");
    app.add_option("--threads", cfg.threads, "Worker threads for parallel stages")
        ->capture_default_str();

    app.add_option("--window", cfg.corpus.window, "Co-occurrence half-window in tokens")
        ->capture_default_str();
    app.add_option("--min-count", cfg.corpus.min_count, "Vocabulary frequency cutoff")
        ->capture_default_str();
    app.add_option("--stopwords", cfg.corpus.stopwords_path,
                   "Stop-word file (one word per line); default is the builtin list");

    app.add_option("--dive-dims", cfg.dive.dims, "DIVE basis count L")->capture_default_str();
    app.add_option("--dive-epochs", cfg.dive.epochs, "DIVE training epochs")
        ->capture_default_str();
    app.add_option("--dive-ki", cfg.dive.k_i, "DIVE negative-term constant k_I")
        ->capture_default_str();
    app.add_option("--dive-negatives", cfg.dive.negatives, "DIVE negative samples per positive")
        ->capture_default_str();
    app.add_option("--dive-seed", cfg.dive.seed, "DIVE RNG seed")->capture_default_str();
    app.add_option("--dive-threads", cfg.dive.threads,
                   "DIVE workers (1 = deterministic mode)")
        ->capture_default_str();

    app.add_option("--sgns-dims", cfg.sgns.dims, "Skip-gram dimension d")->capture_default_str();
    app.add_option("--sgns-window", cfg.sgns.window, "Skip-gram window")->capture_default_str();
    app.add_option("--sgns-epochs", cfg.sgns.epochs, "Skip-gram epochs")->capture_default_str();
    app.add_option("--sgns-negatives", cfg.sgns.negatives, "Skip-gram negative samples")
        ->capture_default_str();
    app.add_option("--sgns-seed", cfg.sgns.seed, "Skip-gram RNG seed")->capture_default_str();
    app.add_option("--sgns-threads", cfg.sgns.threads,
                   "Skip-gram workers (1 = deterministic mode)")
        ->capture_default_str();

    app.add_option("--top-n", cfg.induce.top_n, "Feature words per basis (n)")
        ->capture_default_str();
    app.add_option("--top-m", cfg.induce.topic_top_m, "Words per topic embedding (m)")
        ->capture_default_str();
    app.add_option("--clusters", cfg.induce.clusters, "Sense clusters per word (k)")
        ->capture_default_str();
    app.add_option("--induce-seed", cfg.induce.seed, "Clustering RNG seed")
        ->capture_default_str();
    app.add_flag("--include-query", cfg.induce.include_query,
                 "Keep the query word inside its own feature word lists");
    app.add_flag("--dump-ego", cfg.induce.dump_ego, "Write ego_<word>.json for induced words");

    app.add_option("--iterations", cfg.refine.iterations, "EM refinement iterations")
        ->capture_default_str();
    app.add_option("--sentence-len", cfg.refine.sentence_len,
                   "Tokens per sentence chunk during refinement")
        ->capture_default_str();
    app.add_flag("--warm-start", cfg.refine.warm_start, "Warm-start M-step retraining");
    app.add_option("--refine-seed", cfg.refine.seed, "Refinement RNG seed")
        ->capture_default_str();

    app.add_option("--wcr-queries", cfg.eval.wcr_queries, "WCR query TSV path");
    app.add_option("--pseudo-min-mentions", cfg.eval.pseudo_min_mentions,
                   "Minimum mentions per conflated word")
        ->capture_default_str();
    app.add_option("--pseudo-seed", cfg.eval.pseudo_seed, "Evaluation RNG seed")
        ->capture_default_str();

    app.add_option("--sample-tokens", cfg.sample.total_tokens, "gen-corpus: token count")
        ->capture_default_str();
    app.add_option("--sample-seed", cfg.sample.seed, "gen-corpus: RNG seed")
        ->capture_default_str();
    app.add_option("--sample-doc-len", cfg.sample.doc_len, "gen-corpus: tokens per document")
        ->capture_default_str();

    auto* gen = app.add_subcommand("gen-corpus", "Generate the bundled sample corpus");
    auto* ingest = app.add_subcommand("ingest", "Tokenize the corpus and build the vocabulary");
    auto* cooc = app.add_subcommand("cooc", "Count sliding-window co-occurrences");
    auto* train_dive = app.add_subcommand("train-dive", "Train the non-negative embedding");
    auto* train_sgns = app.add_subcommand("train-sgns", "Train the skip-gram embedding");

    auto* induce = app.add_subcommand("induce", "Induce sense models for query words");
    std::vector<std::string> induce_words;
    bool induce_all = false;
    induce->add_option("words", induce_words, "Query words");
    induce->add_flag("--all", induce_all, "Induce senses for every vocabulary word");

    auto* refine = app.add_subcommand("refine", "EM-refine sense embeddings");

    auto* eval_wcr = app.add_subcommand("eval-wcr", "Precision@1 on word-context queries");
    int synthesize = 0;
    eval_wcr->add_option("--synth", synthesize,
                         "Generate queries with this many context words before scoring");

    auto* eval_pseudo = app.add_subcommand("eval-pseudo", "Pseudoword sense-purity evaluation");
    std::string word_a, word_b;
    eval_pseudo->add_option("word_a", word_a, "First word to conflate")->required();
    eval_pseudo->add_option("word_b", word_b, "Second word to conflate")->required();

    auto* inspect = app.add_subcommand("inspect", "Show a word's sense clusters");
    std::string inspect_word;
    inspect->add_option("word", inspect_word, "Word to inspect")->required();

    // Global flags may appear before or after the subcommand name.
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            wsi::pipeline::stage_gen_corpus(cfg);
        } else if (ingest->parsed()) {
            wsi::pipeline::stage_ingest(cfg);
        } else if (cooc->parsed()) {
            wsi::pipeline::stage_cooc(cfg);
        } else if (train_dive->parsed()) {
            wsi::pipeline::stage_train_dive(cfg);
        } else if (train_sgns->parsed()) {
            wsi::pipeline::stage_train_sgns(cfg);
        } else if (induce->parsed()) {
            wsi::pipeline::stage_induce(cfg, induce_words, induce_all);
        } else if (refine->parsed()) {
            wsi::pipeline::stage_refine(cfg);
        } else if (eval_wcr->parsed()) {
            wsi::pipeline::stage_eval_wcr(cfg, synthesize);
        } else if (eval_pseudo->parsed()) {
            wsi::pipeline::stage_eval_pseudo(cfg, word_a, word_b);
        } else if (inspect->parsed()) {
            wsi::pipeline::stage_inspect(cfg, inspect_word, std::cout);
        }
    } catch (const wsi::DependencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDependency;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
