// Compares the serial reference kernels against their OpenMP versions on a
// generated corpus and prints one line per kernel with the speedup.

#include <omp.h>

#include <cstdio>
#include <string>

#include "wsi/corpus.hpp"
#include "wsi/dive.hpp"
#include "wsi/egograph.hpp"
#include "wsi/pipeline.hpp"
#include "wsi/senses.hpp"
#include "wsi/sgns.hpp"
#include "wsi/synth.hpp"

using namespace wsi;

namespace {

struct Timing {
    double serial = 0.0;
    double parallel = 0.0;
};

void report(const char* kernel, const Timing& t) {
    std::printf("%-24s serial %8.3fs   omp %8.3fs   speedup %5.2fx\n", kernel, t.serial,
                t.parallel, t.parallel > 0.0 ? t.serial / t.parallel : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
    size_t tokens = 400'000;
    int threads = omp_get_max_threads();
    for (int i = 1; i < argc - 1; ++i) {
        std::string arg = argv[i];
        if (arg == "--tokens") tokens = std::stoull(argv[++i]);
        if (arg == "--threads") threads = std::stoi(argv[++i]);
    }
    std::printf("tokens=%zu threads=%d\n", tokens, threads);

    synth::TopicCorpusConfig scfg;
    scfg.total_tokens = tokens;
    corpus::TokenizedText text = synth::topic_corpus(scfg);
    corpus::Vocabulary vocab = corpus::build_vocabulary(text.tokens, 5);
    corpus::TokenStream stream = corpus::to_ids(text, vocab);

    Timing cooc;
    corpus::CooccurrenceTable table;
    {
        double t0 = omp_get_wtime();
        corpus::CooccurrenceTable serial = corpus::count_cooccurrences_serial(stream, vocab.size(), 10);
        cooc.serial = omp_get_wtime() - t0;
        t0 = omp_get_wtime();
        table = corpus::count_cooccurrences(stream, vocab.size(), 10, threads);
        cooc.parallel = omp_get_wtime() - t0;
        if (serial.nnz() != table.nnz()) {
            std::printf("cooc mismatch: serial nnz %zu vs parallel nnz %zu\n", serial.nnz(),
                        table.nnz());
            return 1;
        }
    }
    report("count_cooccurrences", cooc);

    dive::DiveTrainConfig dcfg;
    dcfg.dims = 50;
    dcfg.epochs = 2;
    Timing dive_t;
    dive::DiveEmbedding dive_emb;
    {
        double t0 = omp_get_wtime();
        dcfg.threads = 1;
        dive_emb = dive::train_dive(table, dcfg);
        dive_t.serial = omp_get_wtime() - t0;
        t0 = omp_get_wtime();
        dcfg.threads = threads;
        dive::train_dive(table, dcfg);
        dive_t.parallel = omp_get_wtime() - t0;
    }
    report("train_dive", dive_t);

    sgns::SgnsConfig gcfg;
    gcfg.dims = 100;
    gcfg.epochs = 1;
    Timing sgns_t;
    sgns::DenseEmbedding dense;
    {
        double t0 = omp_get_wtime();
        gcfg.threads = 1;
        dense = sgns::train_sgns(stream, vocab.freq, gcfg);
        sgns_t.serial = omp_get_wtime() - t0;
        t0 = omp_get_wtime();
        gcfg.threads = threads;
        sgns::train_sgns(stream, vocab.freq, gcfg);
        sgns_t.parallel = omp_get_wtime() - t0;
    }
    report("train_sgns", sgns_t);

    // Induction across the most frequent query words.
    pipeline::InduceParams params;
    params.top_n = 50;
    params.topic_top_m = 200;
    egograph::TopWordsCache cache =
        egograph::TopWordsCache::build(dive_emb.word_vecs, params.topic_top_m, threads);
    std::vector<WordId> identity(vocab.size());
    for (size_t i = 0; i < identity.size(); ++i) identity[i] = static_cast<WordId>(i);
    std::vector<senses::TopicEmbedding> topics = senses::all_topic_embeddings(
        dive_emb.word_vecs, cache, dense, identity, params.topic_top_m, threads);
    std::vector<Vector> topic_vecs(topics.size());
    for (auto& t : topics) topic_vecs[static_cast<size_t>(t.basis)] = t.vec;
    pipeline::InductionContext ctx{&dive_emb.word_vecs, &cache, &topic_vecs, &vocab, params};

    const int queries = std::min<int>(200, static_cast<int>(vocab.size()));
    Timing induce_t;
    {
        double t0 = omp_get_wtime();
        for (int q = 0; q < queries; ++q) pipeline::induce_word(ctx, q);
        induce_t.serial = omp_get_wtime() - t0;
        t0 = omp_get_wtime();
#pragma omp parallel for num_threads(threads) schedule(dynamic)
        for (int q = 0; q < queries; ++q) pipeline::induce_word(ctx, q);
        induce_t.parallel = omp_get_wtime() - t0;
    }
    report("induce_word x200", induce_t);
    return 0;
}
