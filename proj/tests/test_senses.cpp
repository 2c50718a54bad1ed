#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wsi/rng.hpp"
#include "wsi/senses.hpp"
#include "test_util.hpp"

using namespace wsi;
using namespace wsi::senses;

namespace {

sgns::DenseEmbedding dense_from(std::initializer_list<std::initializer_list<double>> rows) {
    sgns::DenseEmbedding emb;
    size_t r = rows.size();
    size_t c = rows.begin()->size();
    emb.word_vecs.resize(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    size_t i = 0;
    for (const auto& row : rows) {
        size_t j = 0;
        for (double v : row) emb.word_vecs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j++)) = v;
        ++i;
    }
    return emb;
}

std::vector<WordId> identity_map(size_t n) {
    std::vector<WordId> m(n);
    for (size_t i = 0; i < n; ++i) m[i] = static_cast<WordId>(i);
    return m;
}

egograph::EgoNetwork hand_network(WordId query, std::vector<int> nodes) {
    egograph::EgoNetwork net;
    net.query = query;
    net.nodes = std::move(nodes);
    net.threshold = 0.0;
    net.adjacency = Matrix::Zero(static_cast<Eigen::Index>(net.nodes.size()),
                                 static_cast<Eigen::Index>(net.nodes.size()));
    return net;
}

}  // namespace

TEST_CASE("topic embedding of two equal-value words is the plain mean") {
    Matrix dive = Matrix::Zero(2, 1);
    dive(0, 0) = 3.0;
    dive(1, 0) = 3.0;
    sgns::DenseEmbedding dense = dense_from({{1.0, 0.0}, {0.0, 1.0}});
    egograph::TopWordsCache cache = egograph::TopWordsCache::build(dive, 2);
    TopicEmbedding t = topic_embedding(dive, cache, dense, identity_map(2), 0, 2);
    CHECK(t.vec(0) == doctest::Approx(0.5));
    CHECK(t.vec(1) == doctest::Approx(0.5));
}

TEST_CASE("topic embedding of a single word is that word's vector") {
    Matrix dive = Matrix::Zero(3, 2);
    dive(1, 0) = 2.0;
    sgns::DenseEmbedding dense = dense_from({{9.0, 9.0}, {1.0, 7.0}, {9.0, 9.0}});
    egograph::TopWordsCache cache = egograph::TopWordsCache::build(dive, 3);
    TopicEmbedding t = topic_embedding(dive, cache, dense, identity_map(3), 0, 1);
    CHECK(t.vec(0) == doctest::Approx(1.0));
    CHECK(t.vec(1) == doctest::Approx(7.0));
}

TEST_CASE("topic embedding weights follow exp of mean-normalized values") {
    // Values 1.5 and 0.5 around mean 1: weights e^1.5 and e^0.5, i.e. the
    // first word gets sigma(1) of the mass.
    Matrix dive = Matrix::Zero(2, 1);
    dive(0, 0) = 1.5;
    dive(1, 0) = 0.5;
    sgns::DenseEmbedding dense = dense_from({{1.0, 0.0}, {0.0, 1.0}});
    egograph::TopWordsCache cache = egograph::TopWordsCache::build(dive, 2);
    TopicEmbedding t = topic_embedding(dive, cache, dense, identity_map(2), 0, 2);
    double w0 = 1.0 / (1.0 + std::exp(-1.0));
    CHECK(t.vec(0) == doctest::Approx(w0).epsilon(1e-12));
    CHECK(t.vec(1) == doctest::Approx(1.0 - w0).epsilon(1e-12));
}

TEST_CASE("exp weighting is strictly monotone in the basis value") {
    Matrix dive = Matrix::Zero(2, 1);
    dive(0, 0) = 2.0;
    dive(1, 0) = 1.0;
    sgns::DenseEmbedding dense = dense_from({{1.0, 0.0}, {0.0, 1.0}});
    egograph::TopWordsCache cache = egograph::TopWordsCache::build(dive, 2);
    TopicEmbedding t = topic_embedding(dive, cache, dense, identity_map(2), 0, 2);
    CHECK(t.vec(0) > t.vec(1));  // orthonormal inputs expose the weights
}

TEST_CASE("dense-vocabulary misses are skipped before normalization") {
    Matrix dive = Matrix::Zero(3, 1);
    dive(0, 0) = 5.0;  // missing from the dense vocabulary
    dive(1, 0) = 2.0;
    dive(2, 0) = 2.0;
    sgns::DenseEmbedding dense = dense_from({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    std::vector<WordId> map = {kNoWord, 1, 2};
    egograph::TopWordsCache cache = egograph::TopWordsCache::build(dive, 3);
    TopicEmbedding t = topic_embedding(dive, cache, dense, map, 0, 3);
    // Remaining words have equal values, so the mean normalizes both to 1.
    CHECK(t.vec(0) == doctest::Approx(0.5));
    CHECK(t.vec(1) == doctest::Approx(0.5));
}

TEST_CASE("all-zero or fully missing columns are errors") {
    Matrix dive = Matrix::Zero(2, 2);
    dive(0, 0) = 1.0;
    sgns::DenseEmbedding dense = dense_from({{1.0}, {1.0}});
    egograph::TopWordsCache cache = egograph::TopWordsCache::build(dive, 2);
    CHECK_THROWS_AS(topic_embedding(dive, cache, dense, identity_map(2), 1, 2), ContractError);
    std::vector<WordId> none = {kNoWord, kNoWord};
    CHECK_THROWS_AS(topic_embedding(dive, cache, dense, none, 0, 2), ContractError);
}

TEST_CASE("singleton cluster copies the topic embedding") {
    Matrix dive = Matrix::Zero(1, 2);
    dive(0, 0) = 1.0;
    dive(0, 1) = 1.0;
    std::vector<Vector> topics(2);
    topics[0] = Vector::Zero(2);
    topics[0] << 3.0, 4.0;
    topics[1] = Vector::Zero(2);
    topics[1] << -1.0, 2.0;
    egograph::EgoNetwork net = hand_network(0, {0, 1});
    speccluster::ClusterAssignment assign;
    assign.labels = {0, 1};
    assign.k = 2;
    SenseModel m = sense_embeddings(dive, topics, assign, net, "w");
    REQUIRE(m.sense_vecs.size() == 2);
    CHECK((m.sense_vecs[0] - topics[0]).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK((m.sense_vecs[1] - topics[1]).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK(m.provenance == SenseModel::Provenance::initial);
}

TEST_CASE("equal relevance averages topic embeddings unweighted") {
    Matrix dive = Matrix::Zero(1, 2);
    dive(0, 0) = 2.0;
    dive(0, 1) = 2.0;
    std::vector<Vector> topics(2);
    topics[0] = Vector::Zero(1);
    topics[0] << 4.0;
    topics[1] = Vector::Zero(1);
    topics[1] << 8.0;
    egograph::EgoNetwork net = hand_network(0, {0, 1});
    speccluster::ClusterAssignment assign;
    assign.labels = {0, 0};
    assign.k = 1;
    SenseModel m = sense_embeddings(dive, topics, assign, net, "w");
    REQUIRE(m.sense_vecs.size() == 1);
    CHECK(m.sense_vecs[0](0) == doctest::Approx(6.0));
}

TEST_CASE("three-basis hand example weights the second cluster e to one") {
    // Normalized relevances [2, 1, 0]; clusters {basis0} and {basis1, basis2}.
    Matrix dive = Matrix::Zero(1, 3);
    dive(0, 0) = 2.0;
    dive(0, 1) = 1.0;
    dive(0, 2) = 0.0;
    std::vector<Vector> topics(3);
    for (int b = 0; b < 3; ++b) {
        topics[static_cast<size_t>(b)] = Vector::Zero(3);
        topics[static_cast<size_t>(b)](b) = 1.0;  // t_b = e_b
    }
    egograph::EgoNetwork net = hand_network(0, {0, 1, 2});
    speccluster::ClusterAssignment assign;
    assign.labels = {0, 1, 1};
    assign.k = 2;
    SenseModel m = sense_embeddings(dive, topics, assign, net, "w");
    REQUIRE(m.sense_vecs.size() == 2);
    double e = std::exp(1.0);
    CHECK(m.sense_vecs[1](1) == doctest::Approx(e / (e + 1.0)).epsilon(1e-12));
    CHECK(m.sense_vecs[1](2) == doctest::Approx(1.0 / (e + 1.0)).epsilon(1e-12));
    CHECK(m.sense_vecs[0](0) == doctest::Approx(1.0));
}

TEST_CASE("sense vectors are convex combinations of topic embeddings") {
    Rng rng(5);
    Matrix dive = Matrix::Zero(1, 6);
    std::vector<Vector> topics(6);
    double max_norm = 0.0;
    for (int b = 0; b < 6; ++b) {
        dive(0, b) = rng.uniform(0.2, 3.0);
        topics[static_cast<size_t>(b)] = Vector::Zero(4);
        for (int d = 0; d < 4; ++d) topics[static_cast<size_t>(b)](d) = rng.uniform(-2.0, 2.0);
        max_norm = std::max(max_norm, topics[static_cast<size_t>(b)].norm());
    }
    egograph::EgoNetwork net = hand_network(0, {0, 1, 2, 3, 4, 5});
    speccluster::ClusterAssignment assign;
    assign.labels = {0, 1, 0, 1, 0, 1};
    assign.k = 2;
    SenseModel m = sense_embeddings(dive, topics, assign, net, "w");
    for (const auto& s : m.sense_vecs) {
        CHECK(s.norm() <= max_norm + 1e-12);
    }
}

TEST_CASE("scaling the query row leaves sense vectors unchanged") {
    Rng rng(6);
    Matrix dive = Matrix::Zero(1, 4);
    for (int b = 0; b < 4; ++b) dive(0, b) = rng.uniform(0.5, 2.0);
    std::vector<Vector> topics(4);
    for (int b = 0; b < 4; ++b) {
        topics[static_cast<size_t>(b)] = Vector::Zero(3);
        for (int d = 0; d < 3; ++d) topics[static_cast<size_t>(b)](d) = rng.uniform(-1.0, 1.0);
    }
    egograph::EgoNetwork net = hand_network(0, {0, 1, 2, 3});
    speccluster::ClusterAssignment assign;
    assign.labels = {0, 1, 1, 0};
    assign.k = 2;
    SenseModel base = sense_embeddings(dive, topics, assign, net, "w");
    for (double alpha : {0.1, 3.0, 10.0}) {
        Matrix scaled = alpha * dive;
        SenseModel m = sense_embeddings(scaled, topics, assign, net, "w");
        for (size_t k = 0; k < base.sense_vecs.size(); ++k) {
            CHECK((m.sense_vecs[k] - base.sense_vecs[k]).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("empty clusters are dropped") {
    Matrix dive = Matrix::Zero(1, 2);
    dive(0, 0) = 1.0;
    dive(0, 1) = 1.0;
    std::vector<Vector> topics(2, Vector::Ones(2));
    egograph::EgoNetwork net = hand_network(0, {0, 1});
    speccluster::ClusterAssignment assign;
    assign.labels = {0, 2};  // cluster 1 is empty
    assign.k = 3;
    SenseModel m = sense_embeddings(dive, topics, assign, net, "w");
    CHECK(m.sense_vecs.size() == 2);
    CHECK(m.clusters.size() == 2);
}

TEST_CASE("sense inventory ranks words by relevance-weighted basis values") {
    Matrix dive = Matrix::Zero(4, 2);
    // Basis 0: word 1 strongest; basis 1: word 2 strongest; word 3 weak.
    dive(0, 0) = 1.0;
    dive(0, 1) = 1.0;
    dive(1, 0) = 5.0;
    dive(2, 1) = 4.0;
    dive(3, 0) = 0.5;
    dive(3, 1) = 0.5;
    corpus::Vocabulary vocab;
    vocab.words = {"q", "strong", "second", "weak"};
    vocab.freq = {4, 3, 2, 1};
    vocab.reindex();

    SenseModel m;
    m.word = "q";
    m.clusters.push_back({{0, 1}, {1.0, 1.0}});
    m.sense_vecs.push_back(Vector::Zero(1));
    m.stale.push_back(false);
    auto lists = sense_inventory(m, dive, vocab, 2);
    REQUIRE(lists.size() == 1);
    CHECK(lists[0] == std::vector<std::string>{"strong", "second"});
}
