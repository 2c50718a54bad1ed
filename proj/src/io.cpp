#include "wsi/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wsi::io {

using nlohmann::json;

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DependencyError(path);
    }
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw SchemaError(path, 0, "cannot open for writing");
    }
    return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

int64_t parse_int(const std::string& s, const std::string& path, long line) {
    try {
        size_t used = 0;
        int64_t v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SchemaError(path, line, "expected an integer, got '" + s + "'");
    }
}

double parse_double(const std::string& s, const std::string& path, long line) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SchemaError(path, line, "expected a number, got '" + s + "'");
    }
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in = open_in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out = open_out(path);
    out << content;
}

void save_vocabulary(const std::string& path, const corpus::Vocabulary& vocab) {
    std::ofstream out = open_out(path);
    for (size_t i = 0; i < vocab.size(); ++i) {
        out << vocab.words[i] << '\t' << vocab.freq[i] << '\n';
    }
}

corpus::Vocabulary load_vocabulary(const std::string& path) {
    std::ifstream in = open_in(path);
    corpus::Vocabulary vocab;
    vocab.min_count = 1;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split(line, '\t');
        if (fields.size() != 2 || fields[0].empty()) {
            throw SchemaError(path, lineno, "expected 'word<TAB>freq'");
        }
        vocab.words.push_back(fields[0]);
        vocab.freq.push_back(parse_int(fields[1], path, lineno));
    }
    if (vocab.words.empty()) {
        throw SchemaError(path, 0, "empty vocabulary file");
    }
    vocab.reindex();
    if (vocab.id_of.size() != vocab.words.size()) {
        throw SchemaError(path, 0, "duplicate words in vocabulary file");
    }
    return vocab;
}

void save_tokens(const std::string& path, const corpus::TokenizedText& text) {
    std::ofstream out = open_out(path);
    for (size_t d = 0; d < text.docs(); ++d) {
        auto [lo, hi] = text.doc_range(d);
        for (size_t i = lo; i < hi; ++i) {
            if (i > lo) out << ' ';
            out << text.tokens[i];
        }
        out << '\n';
    }
}

corpus::TokenizedText load_tokens(const std::string& path) {
    std::ifstream in = open_in(path);
    corpus::TokenizedText text;
    std::string line;
    while (std::getline(in, line)) {
        bool first = true;
        size_t start = 0;
        while (start < line.size()) {
            size_t pos = line.find(' ', start);
            size_t end = pos == std::string::npos ? line.size() : pos;
            if (end > start) {
                if (first) {
                    text.doc_offsets.push_back(text.tokens.size());
                    first = false;
                }
                text.tokens.push_back(line.substr(start, end - start));
            }
            start = end + 1;
        }
    }
    return text;
}

void save_cooccurrence(const std::string& path, const corpus::CooccurrenceTable& table,
                       const corpus::Vocabulary& vocab) {
    if (table.vocab_size() != vocab.size()) {
        throw ContractError("save_cooccurrence: table does not match the vocabulary");
    }
    std::ofstream out = open_out(path);
    out << "#cooc v1 " << table.vocab_size() << ' ' << table.window << '\n';
    for (size_t w = 0; w < table.vocab_size(); ++w) {
        for (size_t k = table.offsets[w]; k < table.offsets[w + 1]; ++k) {
            out << vocab.words[w] << '\t' << vocab.words[static_cast<size_t>(table.ctx[k])]
                << '\t' << table.cnt[k] << '\n';
        }
    }
}

corpus::CooccurrenceTable load_cooccurrence(const std::string& path,
                                            const corpus::Vocabulary& vocab) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError(path, 1, "missing header");
    }
    std::istringstream header(line);
    std::string magic, version;
    size_t vocab_size = 0;
    int window = 0;
    header >> magic >> version >> vocab_size >> window;
    if (magic != "#cooc" || version != "v1" || header.fail()) {
        throw SchemaError(path, 1, "expected header '#cooc v1 <|V|> <window>'");
    }
    if (vocab_size != vocab.size()) {
        throw SchemaError(path, 1, "vocabulary size mismatch: header says " +
                                       std::to_string(vocab_size) + ", vocabulary has " +
                                       std::to_string(vocab.size()));
    }
    std::vector<std::tuple<WordId, WordId, uint32_t>> triples;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split(line, '\t');
        if (fields.size() != 3) {
            throw SchemaError(path, lineno, "expected 'word<TAB>context<TAB>count'");
        }
        WordId w = vocab.lookup(fields[0]);
        WordId c = vocab.lookup(fields[1]);
        if (w == kNoWord || c == kNoWord) {
            throw SchemaError(path, lineno, "word not in vocabulary");
        }
        int64_t n = parse_int(fields[2], path, lineno);
        if (n <= 0) {
            throw SchemaError(path, lineno, "count must be positive");
        }
        triples.emplace_back(w, c, static_cast<uint32_t>(n));
    }
    return corpus::CooccurrenceTable::from_triples(vocab.size(), window, std::move(triples));
}

void save_embedding(const std::string& path, const Matrix& word_vecs,
                    const std::vector<std::string>& words) {
    if (static_cast<size_t>(word_vecs.rows()) != words.size()) {
        throw ContractError("save_embedding: matrix does not match the word list");
    }
    std::ofstream out = open_out(path);
    out << words.size() << ' ' << word_vecs.cols() << '\n';
    for (size_t i = 0; i < words.size(); ++i) {
        out << words[i];
        for (Eigen::Index d = 0; d < word_vecs.cols(); ++d) {
            out << ' ' << format_double(word_vecs(static_cast<Eigen::Index>(i), d));
        }
        out << '\n';
    }
}

LoadedEmbedding load_embedding(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError(path, 1, "missing header");
    }
    std::istringstream header(line);
    size_t rows = 0, cols = 0;
    header >> rows >> cols;
    if (header.fail() || rows == 0 || cols == 0) {
        throw SchemaError(path, 1, "expected header '<|V|> <L>'");
    }
    LoadedEmbedding emb;
    emb.words.reserve(rows);
    emb.vecs.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    long lineno = 1;
    size_t r = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (r >= rows) {
            throw SchemaError(path, lineno, "more rows than the header declares");
        }
        auto fields = split(line, ' ');
        if (fields.size() != cols + 1 || fields[0].empty()) {
            throw SchemaError(path, lineno, "expected 'word' plus " + std::to_string(cols) +
                                                " values");
        }
        emb.words.push_back(fields[0]);
        for (size_t d = 0; d < cols; ++d) {
            emb.vecs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(d)) =
                parse_double(fields[d + 1], path, lineno);
        }
        ++r;
    }
    if (r != rows) {
        throw SchemaError(path, lineno, "expected " + std::to_string(rows) + " rows, found " +
                                            std::to_string(r));
    }
    return emb;
}

void save_sense_models(const std::string& path, const std::vector<senses::SenseModel>& models) {
    json root = json::array();
    for (const auto& m : models) {
        json senses_json = json::array();
        for (size_t k = 0; k < m.clusters.size(); ++k) {
            json bases = json::array();
            for (size_t i = 0; i < m.clusters[k].bases.size(); ++i) {
                bases.push_back({{"index", m.clusters[k].bases[i]},
                                 {"weight", m.clusters[k].relevance[i]}});
            }
            json vec = json::array();
            for (Eigen::Index d = 0; d < m.sense_vecs[k].size(); ++d) {
                vec.push_back(m.sense_vecs[k](d));
            }
            senses_json.push_back(
                {{"id", static_cast<int>(k)}, {"bases", bases}, {"vector", vec}});
        }
        root.push_back({{"word", m.word}, {"senses", senses_json}});
    }
    write_file(path, root.dump(2) + "\n");
}

std::vector<senses::SenseModel> load_sense_models(const std::string& path) {
    json root;
    try {
        root = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw SchemaError(path, 0, e.what());
    }
    if (!root.is_array()) {
        throw SchemaError(path, 0, "expected a JSON array of sense models");
    }
    std::vector<senses::SenseModel> models;
    try {
        for (const auto& entry : root) {
            senses::SenseModel m;
            m.word = entry.at("word").get<std::string>();
            for (const auto& sense : entry.at("senses")) {
                senses::SenseCluster cluster;
                for (const auto& basis : sense.at("bases")) {
                    cluster.bases.push_back(basis.at("index").get<int>());
                    cluster.relevance.push_back(basis.at("weight").get<double>());
                }
                const auto& vec = sense.at("vector");
                Vector v(vec.size());
                for (size_t d = 0; d < vec.size(); ++d) v(static_cast<Eigen::Index>(d)) = vec[d];
                m.clusters.push_back(std::move(cluster));
                m.sense_vecs.push_back(std::move(v));
                m.stale.push_back(false);
            }
            models.push_back(std::move(m));
        }
    } catch (const json::exception& e) {
        throw SchemaError(path, 0, e.what());
    }
    return models;
}

void save_inventory(const std::string& path, const std::vector<senses::SenseModel>& models,
                    const Matrix& dive_words, const corpus::Vocabulary& vocab, int top_k) {
    std::ofstream out = open_out(path);
    for (const auto& m : models) {
        auto lists = senses::sense_inventory(m, dive_words, vocab, top_k);
        for (size_t k = 0; k < lists.size(); ++k) {
            out << m.word << '\t' << k << '\t';
            for (size_t i = 0; i < lists[k].size(); ++i) {
                if (i > 0) out << ',';
                out << lists[k][i];
            }
            out << '\n';
        }
    }
}

void save_wcr_queries(const std::string& path, const std::vector<eval::WcrQuery>& queries) {
    std::ofstream out = open_out(path);
    auto write_line = [&](const std::string& target, const char* label,
                          const std::vector<std::string>& words) {
        out << target << '\t' << label << '\t';
        for (size_t i = 0; i < words.size(); ++i) {
            if (i > 0) out << ',';
            out << words[i];
        }
        out << '\n';
    };
    for (const auto& q : queries) {
        write_line(q.target, "true", q.true_context);
        for (const auto& fc : q.false_contexts) write_line(q.target, "false", fc);
    }
}

std::vector<eval::WcrQuery> load_wcr_queries(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<eval::WcrQuery> queries;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split(line, '\t');
        if (fields.size() != 3 || fields[0].empty()) {
            throw SchemaError(path, lineno, "expected 'target<TAB>true|false<TAB>words'");
        }
        std::vector<std::string> words;
        for (auto& w : split(fields[2], ',')) {
            if (!w.empty()) words.push_back(w);
        }
        if (words.empty()) {
            throw SchemaError(path, lineno, "empty context word list");
        }
        if (fields[1] == "true") {
            eval::WcrQuery q;
            q.target = fields[0];
            q.true_context = std::move(words);
            queries.push_back(std::move(q));
        } else if (fields[1] == "false") {
            if (queries.empty() || queries.back().target != fields[0]) {
                throw SchemaError(path, lineno, "false context without a preceding true line");
            }
            queries.back().false_contexts.push_back(std::move(words));
        } else {
            throw SchemaError(path, lineno, "label must be 'true' or 'false'");
        }
    }
    for (const auto& q : queries) {
        if (q.false_contexts.size() != 10) {
            throw SchemaError(path, 0, "query for '" + q.target + "' has " +
                                           std::to_string(q.false_contexts.size()) +
                                           " false contexts, expected 10");
        }
    }
    return queries;
}

void save_ego_network(const std::string& path, const egograph::EgoNetwork& net,
                      const std::string& query_word) {
    json adjacency = json::array();
    for (Eigen::Index i = 0; i < net.adjacency.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < net.adjacency.cols(); ++j) {
            row.push_back(net.adjacency(i, j));
        }
        adjacency.push_back(std::move(row));
    }
    json root = {{"query", query_word},
                 {"T", net.threshold},
                 {"nodes", net.nodes},
                 {"adjacency", adjacency}};
    write_file(path, root.dump(2) + "\n");
}

void save_eval_report(const std::string& path, const eval::EvalReport& report) {
    json per_query = json::array();
    for (const auto& r : report.per_query) {
        json entry = {{"target", r.target}, {"correct", r.correct}};
        if (std::isfinite(r.true_similarity)) entry["true_similarity"] = r.true_similarity;
        if (std::isfinite(r.best_false_similarity))
            entry["best_false_similarity"] = r.best_false_similarity;
        per_query.push_back(std::move(entry));
    }
    json root = {{"metric", report.metric}, {"value", report.value}, {"per_query", per_query}};
    write_file(path, root.dump(2) + "\n");
}

void save_tagged_corpus(const std::string& path, const refine::SenseTaggedCorpus& tagged,
                        int sentence_len) {
    if (sentence_len < 1) {
        throw ContractError("save_tagged_corpus: sentence_len must be >= 1");
    }
    std::ofstream out = open_out(path);
    const auto& ids = tagged.tokens.ids;
    for (size_t lo = 0; lo < ids.size(); lo += static_cast<size_t>(sentence_len)) {
        size_t hi = std::min(ids.size(), lo + static_cast<size_t>(sentence_len));
        bool first = true;
        for (size_t i = lo; i < hi; ++i) {
            if (ids[i] == kNoWord) continue;
            if (!first) out << ' ';
            out << tagged.vocab.words[static_cast<size_t>(ids[i])];
            first = false;
        }
        out << '\n';
    }
}

}  // namespace wsi::io
