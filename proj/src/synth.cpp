#include "wsi/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace wsi::synth {

namespace {

const std::array<std::vector<std::string>, 10> kTopics = {{
    // music
    {"song", "band", "album", "guitar", "melody", "rhythm", "concert", "singer", "drum",
     "piano", "chord", "tune", "orchestra", "lyric", "vocal", "tempo", "harmony", "studio",
     "stage", "tour", "audience", "festival", "violin", "chorus"},
    // geography
    {"river", "mountain", "valley", "lake", "ocean", "coast", "island", "desert", "forest",
     "plain", "hill", "glacier", "delta", "canyon", "plateau", "peninsula", "shore", "cliff",
     "stream", "ridge", "terrain", "basin", "region", "cape"},
    // technology
    {"computer", "software", "server", "network", "code", "processor", "database", "machine",
     "program", "device", "interface", "chip", "algorithm", "hardware", "memory", "protocol",
     "user", "digital", "compiler", "keyboard", "screen", "laptop", "browser", "kernel"},
    // food
    {"bread", "cheese", "fruit", "vegetable", "meat", "soup", "rice", "wine", "butter",
     "sauce", "flour", "sugar", "salad", "dish", "kitchen", "meal", "recipe", "oven", "spice",
     "pepper", "salt", "dinner", "flavor", "pasta"},
    // sport
    {"game", "team", "player", "season", "league", "match", "coach", "goal", "championship",
     "tournament", "stadium", "fan", "victory", "defeat", "title", "training", "arena",
     "referee", "trophy", "athlete", "sprint", "medal", "podium", "cup"},
    // science
    {"theory", "experiment", "energy", "particle", "atom", "molecule", "physics", "chemistry",
     "biology", "research", "laboratory", "hypothesis", "measurement", "quantum", "electron",
     "gravity", "mass", "reaction", "equation", "proton", "neutron", "microscope", "velocity",
     "momentum"},
    // politics
    {"government", "election", "partisan", "president", "parliament", "policy", "minister",
     "vote", "law", "senate", "campaign", "congress", "democracy", "republic", "treaty",
     "constitution", "court", "justice", "senator", "ballot", "cabinet", "diplomat", "embassy",
     "mayor"},
    // art
    {"painting", "artist", "museum", "gallery", "sculpture", "canvas", "portrait",
     "exhibition", "drawing", "color", "brush", "masterpiece", "sketch", "frame", "palette",
     "mural", "easel", "pigment", "fresco", "statue", "engraving", "ceramic", "mosaic",
     "gouache"},
    // war
    {"army", "battle", "soldier", "weapon", "infantry", "regiment", "siege", "cavalry",
     "artillery", "commander", "troop", "enemy", "defense", "attack", "invasion", "fortress",
     "garrison", "armor", "rifle", "trench", "brigade", "navy", "admiral", "war"},
    // medicine
    {"doctor", "patient", "hospital", "disease", "treatment", "surgery", "medicine",
     "symptom", "diagnosis", "therapy", "clinic", "nurse", "vaccine", "infection", "blood",
     "heart", "brain", "bone", "muscle", "fever", "dose", "pill", "bandage", "organ"},
}};

const std::array<std::string, 10> kStems = {"musicx", "terrax", "techx", "foodx", "sportx",
                                            "scix",   "polx",   "artx",  "warx",  "medx"};

const std::vector<std::string> kShared = {
    "year",    "day",      "world",   "history", "century",  "period",   "work",
    "example", "group",    "number",  "form",    "order",    "level",    "result",
    "change",  "progress", "area",    "city",    "town",     "people",   "family",
    "house",   "road",     "water",   "land",    "light",    "power",    "model",
    "process", "project",  "report",  "idea",    "question", "problem",  "practice",
    "course",  "building", "village", "paper",   "book",
};

std::string letters(int n) {
    // Base-26 alphabetic suffix, always at least two letters.
    std::string out;
    do {
        out.push_back(static_cast<char>('a' + n % 26));
        n /= 26;
    } while (n > 0);
    while (out.size() < 2) out.push_back('a');
    std::reverse(out.begin(), out.end());
    return out;
}

// Cumulative Zipf distribution over `n` ranks.
std::vector<double> zipf_cdf(int n, double exponent) {
    std::vector<double> cdf(static_cast<size_t>(n));
    double acc = 0.0;
    for (int r = 0; r < n; ++r) {
        acc += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
        cdf[static_cast<size_t>(r)] = acc;
    }
    for (double& v : cdf) v /= acc;
    return cdf;
}

int sample_rank(const std::vector<double>& cdf, Rng& rng) {
    double u = rng.uniform();
    auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    return static_cast<int>(std::min<size_t>(static_cast<size_t>(it - cdf.begin()),
                                             cdf.size() - 1));
}

std::string shared_word(int rank) {
    if (rank < static_cast<int>(kShared.size())) return kShared[static_cast<size_t>(rank)];
    return "comx" + letters(rank - static_cast<int>(kShared.size()));
}

}  // namespace

int topic_count() { return static_cast<int>(kTopics.size()); }

const std::vector<std::string>& curated_topic_words(int topic) {
    return kTopics.at(static_cast<size_t>(topic));
}

const std::vector<std::string>& curated_shared_words() { return kShared; }

std::string topic_word(int topic, int rank) {
    const auto& curated = kTopics.at(static_cast<size_t>(topic));
    if (rank < static_cast<int>(curated.size())) return curated[static_cast<size_t>(rank)];
    return kStems.at(static_cast<size_t>(topic)) + letters(rank - static_cast<int>(curated.size()));
}

corpus::TokenizedText topic_corpus(const TopicCorpusConfig& cfg) {
    if (cfg.words_per_topic < 1 || cfg.doc_len < 1 || cfg.total_tokens == 0) {
        throw ContractError("topic_corpus: invalid configuration");
    }
    Rng rng(cfg.seed);
    const auto topic_cdf = zipf_cdf(cfg.words_per_topic, cfg.zipf);
    const auto shared_cdf = zipf_cdf(cfg.shared_words, cfg.zipf);

    corpus::TokenizedText text;
    text.tokens.reserve(cfg.total_tokens);
    while (text.tokens.size() < cfg.total_tokens) {
        int topic = static_cast<int>(rng.index(kTopics.size()));
        text.doc_offsets.push_back(text.tokens.size());
        size_t len = std::min(static_cast<size_t>(cfg.doc_len),
                              cfg.total_tokens - text.tokens.size());
        for (size_t i = 0; i < len; ++i) {
            if (cfg.shared_words > 0 && rng.uniform() < cfg.shared_frac) {
                text.tokens.push_back(shared_word(sample_rank(shared_cdf, rng)));
            } else {
                text.tokens.push_back(topic_word(topic, sample_rank(topic_cdf, rng)));
            }
        }
    }
    return text;
}

corpus::TokenizedText two_group_corpus(int words_per_group, int docs, int doc_len, uint64_t seed) {
    if (words_per_group < 2 || docs < 2 || doc_len < 2) {
        throw ContractError("two_group_corpus: invalid configuration");
    }
    Rng rng(seed);
    corpus::TokenizedText text;
    for (int d = 0; d < docs; ++d) {
        const char* stem = d % 2 == 0 ? "ga" : "gb";
        text.doc_offsets.push_back(text.tokens.size());
        for (int i = 0; i < doc_len; ++i) {
            text.tokens.push_back(stem + letters(static_cast<int>(rng.index(
                                             static_cast<size_t>(words_per_group)))));
        }
    }
    return text;
}

NestedCorpus nested_context_corpus(const NestedCorpusConfig& cfg) {
    if (cfg.context_words < cfg.block_context || cfg.x_blocks < 1) {
        throw ContractError("nested_context_corpus: invalid configuration");
    }
    Rng rng(cfg.seed);
    NestedCorpus out;
    out.x = "narrowword";
    out.y = "broadword";

    auto context = [&](int rank) { return "ctx" + letters(rank); };
    auto emit_block = [&](const std::string& center, const std::vector<int>& ctx_ranks) {
        out.text.doc_offsets.push_back(out.text.tokens.size());
        size_t half = ctx_ranks.size() / 2;
        for (size_t i = 0; i < half; ++i) out.text.tokens.push_back(context(ctx_ranks[i]));
        out.text.tokens.push_back(center);
        for (size_t i = half; i < ctx_ranks.size(); ++i)
            out.text.tokens.push_back(context(ctx_ranks[i]));
    };
    auto random_context = [&]() {
        std::vector<int> ranks(static_cast<size_t>(cfg.block_context));
        for (auto& r : ranks) r = static_cast<int>(rng.index(static_cast<size_t>(cfg.context_words)));
        return ranks;
    };

    for (int b = 0; b < cfg.x_blocks; ++b) {
        auto ranks = random_context();
        emit_block(out.x, ranks);
        emit_block(out.y, ranks);
        emit_block(out.y, ranks);
    }
    for (int b = 0; b < cfg.extra_y_blocks; ++b) {
        emit_block(out.y, random_context());
    }
    for (int d = 0; d < cfg.background_docs; ++d) {
        out.text.doc_offsets.push_back(out.text.tokens.size());
        for (int i = 0; i < cfg.background_len; ++i) {
            out.text.tokens.push_back(
                context(static_cast<int>(rng.index(static_cast<size_t>(cfg.context_words)))));
        }
    }
    return out;
}

std::vector<eval::WcrQuery> make_wcr_queries(const std::vector<senses::SenseModel>& models,
                                             const Matrix& dive_words,
                                             const corpus::Vocabulary& vocab, int context_size,
                                             uint64_t seed, bool dominant_only) {
    struct Candidate {
        std::string target;
        std::vector<std::string> context;
    };
    std::vector<Candidate> candidates;
    for (const auto& m : models) {
        size_t dominant = 0;
        if (dominant_only) {
            double best_mass = -1.0;
            for (size_t k = 0; k < m.clusters.size(); ++k) {
                double mass = 0.0;
                for (double r : m.clusters[k].relevance) mass += r;
                if (mass > best_mass) {
                    best_mass = mass;
                    dominant = k;
                }
            }
        }
        auto lists = senses::sense_inventory(m, dive_words, vocab, context_size + 1);
        for (size_t k = 0; k < lists.size(); ++k) {
            if (dominant_only && k != dominant) continue;
            Candidate c;
            c.target = m.word;
            for (auto& w : lists[k]) {
                if (w != m.word && static_cast<int>(c.context.size()) < context_size) {
                    c.context.push_back(w);
                }
            }
            if (!c.context.empty()) candidates.push_back(std::move(c));
        }
    }
    if (candidates.size() < 11) {
        throw ContractError("make_wcr_queries: need at least 11 sense inventories");
    }
    Rng rng(seed);
    std::vector<eval::WcrQuery> queries;
    for (size_t i = 0; i < candidates.size(); ++i) {
        size_t others = 0;
        for (const auto& c : candidates) {
            if (c.target != candidates[i].target) ++others;
        }
        if (others < 10) {
            throw ContractError("make_wcr_queries: need 10 distinct false-context sources for '" +
                                candidates[i].target + "'");
        }
        eval::WcrQuery q;
        q.target = candidates[i].target;
        q.true_context = candidates[i].context;
        std::vector<bool> used(candidates.size(), false);
        while (q.false_contexts.size() < 10) {
            size_t j = rng.index(candidates.size());
            if (used[j] || candidates[j].target == q.target) continue;
            used[j] = true;
            q.false_contexts.push_back(candidates[j].context);
        }
        queries.push_back(std::move(q));
    }
    return queries;
}

}  // namespace wsi::synth
