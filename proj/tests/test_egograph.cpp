#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "wsi/egograph.hpp"
#include "wsi/rng.hpp"
#include "test_util.hpp"

using namespace wsi;
using namespace wsi::egograph;

namespace {

Matrix random_nonneg(int rows, int cols, uint64_t seed, double zero_frac = 0.2) {
    Rng rng(seed);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = rng.uniform() < zero_frac ? 0.0 : rng.uniform(0.0, 2.0);
    }
    return m;
}

FeatureConfig feature_cfg(int n) {
    FeatureConfig cfg;
    cfg.top_n = n;
    return cfg;
}

}  // namespace

TEST_CASE("relevant bases use one percent of the mean non-zero entry") {
    Matrix m = Matrix::Zero(2, 4);
    m.row(1) << 10.0, 0.05, 0.0, 5.0;
    RelevantBases rel = relevant_bases(m, 1);
    CHECK(rel.threshold == doctest::Approx((10.0 + 0.05 + 5.0) / 3.0 * 0.01));
    CHECK(rel.nodes == std::vector<int>{0, 3});
}

TEST_CASE("a single non-zero entry is its own node set") {
    Matrix m = Matrix::Zero(1, 5);
    m(0, 2) = 4.0;
    RelevantBases rel = relevant_bases(m, 0);
    CHECK(rel.threshold == doctest::Approx(0.04));
    CHECK(rel.nodes == std::vector<int>{2});
}

TEST_CASE("an all-zero row has no senses") {
    Matrix m = Matrix::Zero(2, 3);
    m(0, 0) = 1.0;
    CHECK_THROWS_AS(relevant_bases(m, 1), NoSensesError);
    CHECK_THROWS_AS(relevant_bases(m, 5), ContractError);
}

TEST_CASE("top words sorts a column with ties by word id") {
    Matrix m = random_nonneg(40, 3, 17);
    for (int basis = 0; basis < 3; ++basis) {
        auto top = top_words(m, basis, 40);
        REQUIRE(top.size() == 40);
        // Full-sort oracle.
        std::vector<WordId> expect(40);
        for (int i = 0; i < 40; ++i) expect[static_cast<size_t>(i)] = i;
        std::stable_sort(expect.begin(), expect.end(), [&](WordId a, WordId b) {
            if (m(a, basis) != m(b, basis)) return m(a, basis) > m(b, basis);
            return a < b;
        });
        CHECK(top == expect);
        CHECK(top_words(m, basis, 5) ==
              std::vector<WordId>(expect.begin(), expect.begin() + 5));
    }
    Matrix single = Matrix::Zero(6, 1);
    single(3, 0) = 2.0;
    CHECK(top_words(single, 0, 1) == std::vector<WordId>{3});
    CHECK_THROWS_AS(top_words(single, 0, 0), ContractError);
    CHECK_THROWS_AS(top_words(single, 0, 7), ContractError);
    CHECK_THROWS_AS(top_words(single, 1, 1), ContractError);
}

TEST_CASE("features of a one-basis query only fill that block") {
    // Query row is non-zero only at basis 1.
    Matrix m = random_nonneg(10, 3, 23, 0.0);
    m.row(0).setZero();
    m(0, 1) = 2.0;
    TopWordsCache cache = TopWordsCache::build(m, 10);
    Vector f = basis_feature(m, cache, 2, 0, feature_cfg(3));
    REQUIRE(f.size() == 9);  // L * n
    for (int j = 0; j < 3; ++j) {
        double block = f.segment(j * 3, 3).cwiseAbs().sum();
        if (j == 1) {
            CHECK(block > 0.0);
        } else {
            CHECK(block == 0.0);
        }
    }
}

TEST_CASE("hand-computed feature for n=1 L=2") {
    // Words: q=0 plus words 1 and 2; query excluded from the ranked lists.
    Matrix m(3, 2);
    m << 0.5, 1.0,   // query row w_q
         3.0, 0.2,   // word 1 tops basis 0
         0.1, 2.0;   // word 2 tops basis 1
    TopWordsCache cache = TopWordsCache::build(m, 3);
    Vector f0 = basis_feature(m, cache, 0, 0, feature_cfg(1));
    REQUIRE(f0.size() == 2);
    // Block j=0: top word of basis 0 is word 1, value w1[b0]*w_q[b0] = 3.0*0.5.
    CHECK(f0(0) == doctest::Approx(1.5));
    // Block j=1: top word of basis 1 is word 2, value w2[b0]*w_q[b1] = 0.1*1.0.
    CHECK(f0(1) == doctest::Approx(0.1));
    Vector f1 = basis_feature(m, cache, 1, 0, feature_cfg(1));
    CHECK(f1(0) == doctest::Approx(0.2 * 0.5));
    CHECK(f1(1) == doctest::Approx(2.0 * 1.0));
}

TEST_CASE("scaling the query row scales features linearly") {
    Matrix m = random_nonneg(20, 4, 31, 0.1);
    TopWordsCache cache = TopWordsCache::build(m, 21);
    Vector before = basis_feature(m, cache, 1, 5, feature_cfg(6));
    Matrix scaled = m;
    scaled.row(5) *= 3.0;
    TopWordsCache cache2 = TopWordsCache::build(scaled, 21);
    Vector after = basis_feature(scaled, cache2, 1, 5, feature_cfg(6));
    CHECK((after - 3.0 * before).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("similarity is one for identical features at min equal to e times T") {
    // Two identical basis columns; the query row is tuned so that
    // min(w_q[b0], w_q[b1]) / T == e.
    const double v1 = 1.0;
    const double v2 = 0.005 * std::exp(1.0) * v1 / (1.0 - 0.005 * std::exp(1.0));
    Matrix m = Matrix::Zero(4, 2);
    m(0, 0) = v1;
    m(0, 1) = v2;
    m(1, 0) = 2.0;
    m(1, 1) = 2.0;
    m(2, 0) = 1.0;
    m(2, 1) = 1.0;
    m(3, 0) = 0.5;
    m(3, 1) = 0.5;
    TopWordsCache cache = TopWordsCache::build(m, 4);
    double sim = basis_similarity(m, cache, 0, 1, 0, feature_cfg(3));
    CHECK(sim == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("similarity of orthogonal features is zero") {
    Matrix m = Matrix::Zero(5, 2);
    m(0, 0) = 1.0;
    m(0, 1) = 1.0;  // query relevant to both bases
    m(1, 0) = 2.0;  // words 1,2 live only in basis 0
    m(2, 0) = 1.0;
    m(3, 1) = 2.0;  // words 3,4 live only in basis 1
    m(4, 1) = 1.0;
    TopWordsCache cache = TopWordsCache::build(m, 5);
    CHECK(basis_similarity(m, cache, 0, 1, 0, feature_cfg(2)) == doctest::Approx(0.0));
}

TEST_CASE("similarity vanishes as the weaker base approaches the threshold") {
    Matrix m = Matrix::Zero(3, 2);
    m(1, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 0) = 1.0;
    m(2, 1) = 1.0;
    for (double delta : {1e-3, 1e-6, 1e-9}) {
        Matrix q = m;
        q(0, 0) = 1.0;
        // T = 0.01 * (1 + t) / 2 and we want q(0,1) = T * (1 + delta); solving
        // t = T(1+delta) gives t = 0.005(1+delta) / (1 - 0.005(1+delta)).
        double t = 0.005 * (1 + delta) / (1.0 - 0.005 * (1 + delta));
        q(0, 1) = t;
        TopWordsCache cache = TopWordsCache::build(q, 3);
        double sim = basis_similarity(q, cache, 0, 1, 0, feature_cfg(2));
        CHECK(std::abs(sim) < 2.0 * delta + 1e-12);
    }
}

TEST_CASE("ego network matches element-wise similarity recomputation") {
    Matrix m = random_nonneg(30, 6, 47, 0.3);
    m.row(7) = Matrix::Ones(1, 6) * 0.8;  // well-spread query
    TopWordsCache cache = TopWordsCache::build(m, 31);
    FeatureConfig cfg = feature_cfg(8);
    EgoNetwork net = build_ego_network(m, cache, 7, cfg);
    REQUIRE(net.nodes.size() >= 2);
    for (size_t i = 0; i < net.nodes.size(); ++i) {
        CHECK(net.adjacency(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) == 0.0);
        for (size_t j = i + 1; j < net.nodes.size(); ++j) {
            double expect = basis_similarity(m, cache, net.nodes[i], net.nodes[j], 7, cfg);
            CHECK(net.adjacency(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
                  doctest::Approx(expect).epsilon(1e-12));
            CHECK(net.adjacency(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
                  net.adjacency(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)));
        }
    }
}

TEST_CASE("similarities are non-negative and symmetric on random inputs") {
    for (uint64_t seed : {3u, 4u, 5u}) {
        Matrix m = random_nonneg(25, 5, seed, 0.4);
        TopWordsCache cache = TopWordsCache::build(m, 26);
        for (WordId q = 0; q < 25; ++q) {
            if (m.row(q).maxCoeff() <= 0.0) continue;
            EgoNetwork net = build_ego_network(m, cache, q, feature_cfg(6));
            CHECK(net.adjacency.minCoeff() >= 0.0);
        }
    }
}

TEST_CASE("one-node queries produce a trivial network") {
    Matrix m = Matrix::Zero(3, 4);
    m(0, 2) = 5.0;
    m(1, 2) = 1.0;
    TopWordsCache cache = TopWordsCache::build(m, 3);
    EgoNetwork net = build_ego_network(m, cache, 0, feature_cfg(2));
    CHECK(net.nodes == std::vector<int>{2});
    CHECK(net.adjacency.rows() == 1);
    CHECK(net.adjacency(0, 0) == 0.0);
}

TEST_CASE("two-block embeddings give stronger in-block similarity") {
    // Bases 0,1 share top words; bases 2,3 share different top words. The
    // query is relevant to all four.
    Rng rng(9);
    Matrix m = Matrix::Zero(21, 4);
    for (int w = 1; w <= 10; ++w) {
        m(w, 0) = rng.uniform(1.0, 2.0);
        m(w, 1) = rng.uniform(1.0, 2.0);
    }
    for (int w = 11; w <= 20; ++w) {
        m(w, 2) = rng.uniform(1.0, 2.0);
        m(w, 3) = rng.uniform(1.0, 2.0);
    }
    m.row(0) << 1.0, 1.1, 0.9, 1.2;
    TopWordsCache cache = TopWordsCache::build(m, 21);
    EgoNetwork net = build_ego_network(m, cache, 0, feature_cfg(10));
    REQUIRE(net.nodes == std::vector<int>{0, 1, 2, 3});
    double in_block = std::min(net.adjacency(0, 1), net.adjacency(2, 3));
    double off_block = std::max({net.adjacency(0, 2), net.adjacency(0, 3), net.adjacency(1, 2),
                                 net.adjacency(1, 3)});
    CHECK(in_block > off_block);
}

TEST_CASE("feature vectors stay aligned across bases") {
    Matrix m = random_nonneg(15, 3, 77, 0.2);
    TopWordsCache cache = TopWordsCache::build(m, 16);
    Vector f0 = basis_feature(m, cache, 0, 2, feature_cfg(4));
    Vector f1 = basis_feature(m, cache, 1, 2, feature_cfg(4));
    Vector f2 = basis_feature(m, cache, 2, 2, feature_cfg(4));
    CHECK(f0.size() == 12);
    CHECK(f1.size() == 12);
    CHECK(f2.size() == 12);
}

TEST_CASE("scaling the query row leaves the ego network invariant") {
    Matrix m = random_nonneg(40, 8, 91, 0.3);
    m.row(3) = random_nonneg(1, 8, 92, 0.2);
    TopWordsCache cache = TopWordsCache::build(m, 41);
    FeatureConfig cfg = feature_cfg(10);
    EgoNetwork base = build_ego_network(m, cache, 3, cfg);
    for (double alpha : {0.1, 3.0, 10.0}) {
        Matrix scaled = m;
        scaled.row(3) *= alpha;
        TopWordsCache cache2 = TopWordsCache::build(scaled, 41);
        EgoNetwork net = build_ego_network(scaled, cache2, 3, cfg);
        CHECK(net.nodes == base.nodes);
        CHECK(net.threshold == doctest::Approx(alpha * base.threshold).epsilon(1e-12));
        REQUIRE(net.adjacency.rows() == base.adjacency.rows());
        CHECK(testutil::max_abs_diff(net.adjacency, base.adjacency) < 1e-9);
    }
}
