#include "wsi/corpus.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>

namespace wsi::corpus {

TokenizeRules TokenizeRules::defaults() {
    TokenizeRules rules;
    const auto& list = default_stop_words();
    rules.stop_words.insert(list.begin(), list.end());
    return rules;
}

TokenizeRules TokenizeRules::none() { return TokenizeRules{}; }

namespace {

// Returns the length of the UTF-8 sequence starting at `i`, or 0 if invalid.
size_t utf8_sequence_length(std::string_view s, size_t i) {
    unsigned char b = static_cast<unsigned char>(s[i]);
    size_t len;
    if (b < 0x80) {
        return 1;
    } else if ((b & 0xE0) == 0xC0) {
        len = 2;
        if (b < 0xC2) return 0;  // overlong
    } else if ((b & 0xF0) == 0xE0) {
        len = 3;
    } else if ((b & 0xF8) == 0xF0) {
        len = 4;
        if (b > 0xF4) return 0;  // beyond U+10FFFF
    } else {
        return 0;
    }
    if (i + len > s.size()) return 0;
    for (size_t k = 1; k < len; ++k) {
        if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return 0;
    }
    return len;
}

}  // namespace

TokenizedText tokenize(std::string_view raw_text, const TokenizeRules& rules) {
    TokenizedText out;
    std::string current;
    bool line_has_content = false;  // current line has seen non-whitespace
    bool pending_boundary = true;   // next token starts a document
    auto flush = [&]() {
        if (current.empty()) return;
        if (rules.stop_words.count(current) == 0) {
            if (pending_boundary) {
                out.doc_offsets.push_back(out.tokens.size());
                pending_boundary = false;
            }
            out.tokens.push_back(current);
        }
        current.clear();
    };
    size_t i = 0;
    while (i < raw_text.size()) {
        unsigned char b = static_cast<unsigned char>(raw_text[i]);
        if (b < 0x80) {
            if (std::isalpha(b)) {
                current.push_back(static_cast<char>(std::tolower(b)));
                line_has_content = true;
            } else {
                flush();
                if (b == '\n') {
                    if (!line_has_content && !out.tokens.empty()) pending_boundary = true;
                    line_has_content = false;
                } else if (!std::isspace(b)) {
                    line_has_content = true;
                }
            }
            ++i;
        } else {
            size_t len = utf8_sequence_length(raw_text, i);
            if (len == 0) {
                throw SchemaError("<input>", static_cast<long>(i), "invalid UTF-8 byte sequence");
            }
            // Valid non-ASCII sequences separate tokens.
            flush();
            line_has_content = true;
            i += len;
        }
    }
    flush();
    return out;
}

void Vocabulary::reindex() {
    id_of.clear();
    id_of.reserve(words.size());
    for (size_t i = 0; i < words.size(); ++i) {
        id_of[words[i]] = static_cast<WordId>(i);
    }
}

Vocabulary build_vocabulary(const std::vector<std::string>& tokens, int64_t min_count) {
    if (min_count < 1) {
        throw ContractError("min_count must be >= 1");
    }
    std::unordered_map<std::string, int64_t> counts;
    counts.reserve(tokens.size() / 4 + 16);
    for (const auto& t : tokens) {
        ++counts[t];
    }
    std::vector<std::pair<std::string, int64_t>> kept;
    kept.reserve(counts.size());
    for (auto& [w, c] : counts) {
        if (c >= min_count) kept.emplace_back(w, c);
    }
    if (kept.empty()) {
        throw ContractError("empty vocabulary: no token reaches min_count=" +
                            std::to_string(min_count));
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    Vocabulary vocab;
    vocab.min_count = min_count;
    vocab.words.reserve(kept.size());
    vocab.freq.reserve(kept.size());
    for (auto& [w, c] : kept) {
        vocab.words.push_back(w);
        vocab.freq.push_back(c);
    }
    vocab.reindex();
    return vocab;
}

TokenStream to_ids(const TokenizedText& text, const Vocabulary& vocab) {
    TokenStream stream;
    stream.ids.reserve(text.tokens.size());
    stream.doc_offsets = text.doc_offsets;
    for (const auto& t : text.tokens) {
        stream.ids.push_back(vocab.lookup(t));
    }
    return stream;
}

uint32_t CooccurrenceTable::count(WordId w, WordId c) const {
    if (w < 0 || static_cast<size_t>(w) >= vocab_size()) return 0;
    auto lo = ctx.begin() + static_cast<ptrdiff_t>(offsets[w]);
    auto hi = ctx.begin() + static_cast<ptrdiff_t>(offsets[w + 1]);
    auto it = std::lower_bound(lo, hi, c);
    if (it == hi || *it != c) return 0;
    return cnt[static_cast<size_t>(it - ctx.begin())];
}

CooccurrenceTable CooccurrenceTable::from_triples(
    size_t vocab_size, int window, std::vector<std::tuple<WordId, WordId, uint32_t>> triples) {
    std::sort(triples.begin(), triples.end());
    CooccurrenceTable table;
    table.window = window;
    table.offsets.assign(vocab_size + 1, 0);
    table.ctx.reserve(triples.size());
    table.cnt.reserve(triples.size());
    table.word_totals.assign(vocab_size, 0.0);
    for (const auto& [w, c, n] : triples) {
        if (w < 0 || static_cast<size_t>(w) >= vocab_size || c < 0 ||
            static_cast<size_t>(c) >= vocab_size) {
            throw ContractError("co-occurrence triple out of vocabulary range");
        }
        ++table.offsets[static_cast<size_t>(w) + 1];
        table.ctx.push_back(c);
        table.cnt.push_back(n);
        table.word_totals[static_cast<size_t>(w)] += static_cast<double>(n);
    }
    for (size_t i = 1; i <= vocab_size; ++i) {
        table.offsets[i] += table.offsets[i - 1];
    }
    double total = 0.0;
    for (double t : table.word_totals) total += t;
    table.z = vocab_size == 0 ? 0.0 : total / static_cast<double>(vocab_size);
    return table;
}

namespace {

// Packs an ordered (word, context) pair into one sortable key.
inline uint64_t pair_key(WordId w, WordId c) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(w)) << 32) |
           static_cast<uint64_t>(static_cast<uint32_t>(c));
}

void emit_pairs_for_range(const TokenStream& tokens, int window, size_t doc, size_t lo, size_t hi,
                          std::vector<uint64_t>& keys) {
    auto [doc_lo, doc_hi] = tokens.doc_range(doc);
    for (size_t i = lo; i < hi; ++i) {
        WordId w = tokens.ids[i];
        if (w == kNoWord) continue;
        size_t left = i - doc_lo >= static_cast<size_t>(window) ? i - static_cast<size_t>(window)
                                                                : doc_lo;
        size_t right = std::min(doc_hi, i + static_cast<size_t>(window) + 1);
        for (size_t j = left; j < right; ++j) {
            if (j == i) continue;
            WordId c = tokens.ids[j];
            if (c == kNoWord) continue;
            keys.push_back(pair_key(w, c));
        }
    }
}

CooccurrenceTable table_from_sorted_keys(size_t vocab_size, int window,
                                         std::vector<uint64_t>& keys) {
    std::vector<std::tuple<WordId, WordId, uint32_t>> triples;
    size_t i = 0;
    while (i < keys.size()) {
        size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        WordId w = static_cast<WordId>(keys[i] >> 32);
        WordId c = static_cast<WordId>(keys[i] & 0xFFFFFFFFu);
        triples.emplace_back(w, c, static_cast<uint32_t>(j - i));
        i = j;
    }
    return CooccurrenceTable::from_triples(vocab_size, window, std::move(triples));
}

}  // namespace

CooccurrenceTable count_cooccurrences(const TokenStream& tokens, size_t vocab_size, int window,
                                      int threads) {
    if (window < 1) {
        throw ContractError("window must be >= 1");
    }
    if (threads < 1) threads = 1;
    size_t n = tokens.ids.size();
    std::vector<std::vector<uint64_t>> shards(static_cast<size_t>(threads));

#pragma omp parallel num_threads(threads)
    {
        int tid = omp_get_thread_num();
        int nt = omp_get_num_threads();
        size_t chunk = (n + static_cast<size_t>(nt) - 1) / static_cast<size_t>(nt);
        size_t lo = static_cast<size_t>(tid) * chunk;
        size_t hi = std::min(n, lo + chunk);
        auto& local = shards[static_cast<size_t>(tid)];
        // Walk documents overlapping [lo, hi); centers outside the chunk are
        // handled by the owning thread, neighbor reads are unrestricted.
        for (size_t d = 0; d < tokens.docs() && lo < hi; ++d) {
            auto [dlo, dhi] = tokens.doc_range(d);
            size_t a = std::max(lo, dlo);
            size_t b = std::min(hi, dhi);
            if (a < b) emit_pairs_for_range(tokens, window, d, a, b, local);
        }
    }

    std::vector<uint64_t> keys;
    size_t total = 0;
    for (auto& s : shards) total += s.size();
    keys.reserve(total);
    for (auto& s : shards) {
        keys.insert(keys.end(), s.begin(), s.end());
        s.clear();
        s.shrink_to_fit();
    }
    std::sort(keys.begin(), keys.end());
    return table_from_sorted_keys(vocab_size, window, keys);
}

CooccurrenceTable count_cooccurrences_serial(const TokenStream& tokens, size_t vocab_size,
                                             int window) {
    if (window < 1) {
        throw ContractError("window must be >= 1");
    }
    std::unordered_map<uint64_t, uint32_t> counts;
    for (size_t d = 0; d < tokens.docs(); ++d) {
        auto [lo, hi] = tokens.doc_range(d);
        for (size_t i = lo; i < hi; ++i) {
            WordId w = tokens.ids[i];
            if (w == kNoWord) continue;
            size_t left = i - lo >= static_cast<size_t>(window) ? i - static_cast<size_t>(window)
                                                                : lo;
            size_t right = std::min(hi, i + static_cast<size_t>(window) + 1);
            for (size_t j = left; j < right; ++j) {
                if (j == i) continue;
                WordId c = tokens.ids[j];
                if (c == kNoWord) continue;
                ++counts[pair_key(w, c)];
            }
        }
    }
    std::vector<std::tuple<WordId, WordId, uint32_t>> triples;
    triples.reserve(counts.size());
    for (auto& [key, n] : counts) {
        triples.emplace_back(static_cast<WordId>(key >> 32),
                             static_cast<WordId>(key & 0xFFFFFFFFu), n);
    }
    return CooccurrenceTable::from_triples(vocab_size, window, std::move(triples));
}

}  // namespace wsi::corpus
