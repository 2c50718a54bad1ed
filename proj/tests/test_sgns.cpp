#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wsi/corpus.hpp"
#include "wsi/rng.hpp"
#include "wsi/sgns.hpp"
#include "wsi/synth.hpp"
#include "test_util.hpp"

using namespace wsi;
using namespace wsi::sgns;

namespace {

struct TrainedGroups {
    corpus::Vocabulary vocab;
    DenseEmbedding emb;
};

TrainedGroups train_two_groups(uint64_t seed) {
    corpus::TokenizedText text = synth::two_group_corpus(10, 500, 20, seed);
    TrainedGroups out;
    out.vocab = corpus::build_vocabulary(text.tokens, 1);
    corpus::TokenStream stream = corpus::to_ids(text, out.vocab);
    SgnsConfig cfg;
    cfg.dims = 16;
    cfg.epochs = 10;
    cfg.window = 4;
    cfg.seed = seed;
    out.emb = train_sgns(stream, out.vocab.freq, cfg);
    return out;
}

}  // namespace

TEST_CASE("context embedding of one word is that word's vector") {
    DenseEmbedding emb;
    emb.word_vecs = Matrix::Zero(3, 2);
    emb.word_vecs << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0;
    Vector v = context_embedding({1}, emb);
    CHECK(v(0) == 3.0);
    CHECK(v(1) == 4.0);
}

TEST_CASE("context embedding of two words is their mean") {
    DenseEmbedding emb;
    emb.word_vecs = Matrix::Zero(2, 2);
    emb.word_vecs << 1.0, 0.0, 0.0, 1.0;
    Vector v = context_embedding({0, 1}, emb);
    CHECK(v(0) == doctest::Approx(0.5));
    CHECK(v(1) == doctest::Approx(0.5));
}

TEST_CASE("context embedding skips gaps, rejects all-oov, ignores order") {
    DenseEmbedding emb;
    emb.word_vecs = Matrix::Random(5, 3);
    CHECK_THROWS_AS(context_embedding({kNoWord, kNoWord}, emb), EmptyContextError);
    CHECK_THROWS_AS(context_embedding({}, emb), EmptyContextError);
    Vector a = context_embedding({0, kNoWord, 2, 4}, emb);
    Vector b = context_embedding({4, 2, 0}, emb);
    CHECK((a - b).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("context embedding matches an independent mean on 20 tokens") {
    Rng rng(3);
    DenseEmbedding emb;
    emb.word_vecs = Matrix::Zero(50, 8);
    for (Eigen::Index i = 0; i < emb.word_vecs.size(); ++i) {
        emb.word_vecs.data()[i] = rng.uniform(-1.0, 1.0);
    }
    std::vector<WordId> sentence;
    for (int i = 0; i < 20; ++i) sentence.push_back(static_cast<WordId>(rng.index(50)));
    Vector got = context_embedding(sentence, emb);
    Vector expected = Vector::Zero(8);
    for (WordId id : sentence) expected += emb.word_vecs.row(id).transpose();
    expected /= 20.0;
    CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("pair gradient matches central finite differences") {
    Rng rng(11);
    const double h = 1e-5;
    for (int trial = 0; trial < 50; ++trial) {
        int dims = 2 + static_cast<int>(rng.index(6));
        Vector u(dims), v(dims);
        for (int d = 0; d < dims; ++d) {
            u(d) = rng.uniform(-1.5, 1.5);
            v(d) = rng.uniform(-1.5, 1.5);
        }
        bool positive = trial % 2 == 1;
        auto value = [&](const Vector& a, const Vector& b) {
            double dot = a.dot(b);
            return std::log(sigmoid(positive ? dot : -dot));
        };
        auto g = pair_gradient(u, v, positive);
        for (int d = 0; d < dims; ++d) {
            Vector up = u, um = u;
            up(d) += h;
            um(d) -= h;
            double fd = (value(up, v) - value(um, v)) / (2.0 * h);
            CHECK(g.wrt_word(d) == doctest::Approx(fd).epsilon(1e-4));
        }
    }
}

TEST_CASE("zero-epoch training returns the initialization") {
    corpus::TokenizedText text = synth::two_group_corpus(6, 20, 10, 2);
    corpus::Vocabulary vocab = corpus::build_vocabulary(text.tokens, 1);
    corpus::TokenStream stream = corpus::to_ids(text, vocab);
    SgnsConfig cfg;
    cfg.dims = 4;
    cfg.epochs = 0;
    cfg.seed = 8;
    DenseEmbedding a = train_sgns(stream, vocab.freq, cfg);
    DenseEmbedding b = train_sgns(stream, vocab.freq, cfg);
    CHECK(testutil::matrices_equal(a.word_vecs, b.word_vecs));
    CHECK(a.ctx_vecs.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single-worker training is seed-deterministic") {
    corpus::TokenizedText text = synth::two_group_corpus(8, 60, 15, 4);
    corpus::Vocabulary vocab = corpus::build_vocabulary(text.tokens, 1);
    corpus::TokenStream stream = corpus::to_ids(text, vocab);
    SgnsConfig cfg;
    cfg.dims = 8;
    cfg.epochs = 2;
    cfg.seed = 5;
    DenseEmbedding a = train_sgns(stream, vocab.freq, cfg);
    DenseEmbedding b = train_sgns(stream, vocab.freq, cfg);
    CHECK(testutil::matrices_equal(a.word_vecs, b.word_vecs));
    CHECK(testutil::matrices_equal(a.ctx_vecs, b.ctx_vecs));
}

TEST_CASE("disjoint co-occurrence groups separate in cosine") {
    TrainedGroups t = train_two_groups(13);
    std::vector<WordId> group_a, group_b;
    for (size_t w = 0; w < t.vocab.size(); ++w) {
        (t.vocab.words[w].substr(0, 2) == "ga" ? group_a : group_b)
            .push_back(static_cast<WordId>(w));
    }
    REQUIRE(group_a.size() >= 5);
    REQUIRE(group_b.size() >= 5);

    auto cos = [&](WordId a, WordId b) {
        Vector u = t.emb.word_vecs.row(a).transpose();
        Vector v = t.emb.word_vecs.row(b).transpose();
        return cosine(u, v);
    };
    int ok = 0, total = 0;
    for (WordId a : group_a) {
        for (WordId a2 : group_a) {
            if (a >= a2) continue;
            double within = cos(a, a2);
            for (WordId b : group_b) {
                ++total;
                if (within > cos(a, b)) ++ok;
            }
        }
    }
    CHECK(static_cast<double>(ok) >= 0.95 * static_cast<double>(total));
}

TEST_CASE("gaps in the stream never train") {
    corpus::TokenStream stream;
    stream.ids = {kNoWord, 0, kNoWord, kNoWord, 1, kNoWord};
    stream.doc_offsets = {0};
    SgnsConfig cfg;
    cfg.dims = 4;
    cfg.epochs = 2;
    cfg.window = 1;  // distance 1 is always a gap, so no pair ever forms
    DenseEmbedding trained = train_sgns(stream, {5, 5}, cfg);
    cfg.epochs = 0;
    DenseEmbedding init = train_sgns(stream, {5, 5}, cfg);
    CHECK(testutil::matrices_equal(trained.word_vecs, init.word_vecs));
}

TEST_CASE("warm start carries matching rows over") {
    corpus::TokenizedText text = synth::two_group_corpus(6, 30, 10, 6);
    corpus::Vocabulary vocab = corpus::build_vocabulary(text.tokens, 1);
    corpus::TokenStream stream = corpus::to_ids(text, vocab);
    SgnsConfig cfg;
    cfg.dims = 4;
    cfg.epochs = 1;
    DenseEmbedding base = train_sgns(stream, vocab.freq, cfg);
    std::vector<WordId> rows(vocab.size());
    for (size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<WordId>(i);
    cfg.epochs = 0;
    DenseEmbedding warm = train_sgns_warm(stream, vocab.freq, cfg, base, rows);
    CHECK(testutil::matrices_equal(warm.word_vecs, base.word_vecs));
    CHECK_THROWS_AS(train_sgns_warm(stream, vocab.freq, cfg, base, {0}), ContractError);
}

TEST_CASE("training rejects empty inputs") {
    corpus::TokenStream empty;
    CHECK_THROWS_AS(train_sgns(empty, {1}, SgnsConfig{}), ContractError);
    corpus::TokenStream s;
    s.ids = {0};
    s.doc_offsets = {0};
    CHECK_THROWS_AS(train_sgns(s, {}, SgnsConfig{}), ContractError);
}
