#include "lexdiv/ngram.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>

#include "lexdiv/error.hpp"

namespace lexdiv {

namespace {

constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001B3ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr char kExemplarSep = '\x1f';

std::string join_tokens(const std::vector<std::string>& tokens, std::size_t begin, int n) {
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out.push_back(kExemplarSep);
        out += tokens[begin + i];
    }
    return out;
}

}  // namespace

std::uint64_t hash_token(std::string_view token) {
    std::uint64_t h = kFnvOffset;
    for (unsigned char c : token) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

std::uint64_t combine_ngram(const std::uint64_t* token_hashes, int n) {
    std::uint64_t h = 0x3C79AC492BA7B653ULL;
    for (int i = 0; i < n; ++i) h = mix64(h ^ token_hashes[i]);
    return h;
}

std::vector<std::uint64_t> ngram_keys(const TokenSeq& tokens, int n) {
    if (n < 1) throw argument_error("n-gram order must be >= 1");
    std::vector<std::uint64_t> keys;
    if (tokens.size() < static_cast<std::size_t>(n)) return keys;
    std::vector<std::uint64_t> th(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) th[i] = hash_token(tokens.tokens[i]);
    keys.reserve(tokens.size() - n + 1);
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        keys.push_back(combine_ngram(th.data() + i, n));
    }
    return keys;
}

std::unordered_map<std::uint64_t, std::uint32_t> extract_ngrams(const TokenSeq& tokens, int n) {
    std::unordered_map<std::uint64_t, std::uint32_t> out;
    for (std::uint64_t key : ngram_keys(tokens, n)) ++out[key];
    return out;
}

NGramTableBuilder::NGramTableBuilder(int n, const TokenizerConfig& config)
    : n_(n), config_(config) {
    if (n < 1) throw argument_error("n-gram order must be >= 1");
    table_.n = n;
    table_.config_hash = config.fingerprint();
    table_.corpus_hash = kFnvOffset;
}

void NGramTableBuilder::add_summary(std::string_view id, std::string_view summary) {
    table_.corpus_hash = mix64(table_.corpus_hash ^ hash_token(id));
    table_.corpus_hash = mix64(table_.corpus_hash ^ hash_token(summary));
    ++table_.total_summaries;

    TokenSeq tokens = tokenize(summary, config_);
    if (tokens.size() < static_cast<std::size_t>(n_)) return;
    std::vector<std::uint64_t> th(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) th[i] = hash_token(tokens.tokens[i]);
    for (std::size_t i = 0; i + n_ <= tokens.size(); ++i) {
        std::uint64_t key = combine_ngram(th.data() + i, n_);
        ++table_.counts[key];
        ++table_.total_instances;
        if (check_collisions_) {
            std::string joined = join_tokens(tokens.tokens, i, n_);
            auto [it, inserted] = exemplars_.emplace(key, joined);
            if (!inserted && it->second != joined) {
                throw validation_error("64-bit n-gram hash collision: '" + it->second +
                                       "' vs '" + joined + "'");
            }
        }
    }
}

NGramTable NGramTableBuilder::finish() { return std::move(table_); }

NGramTable build_table(const Dataset& train, int n, const TokenizerConfig& config) {
    if (train.split != Split::train) {
        throw argument_error("n-gram tables are built over the train split");
    }
    if (train.samples.empty()) throw validation_error("empty training corpus");
    NGramTableBuilder builder(n, config);
    builder.set_collision_check(false);
    for (const Sample& s : train.samples) builder.add_summary(s.id, s.summary);
    return builder.finish();
}

OverlapScore percent_overlap(const TokenSeq& summary, const NGramTable& table,
                             OverlapSemantics semantics) {
    OverlapScore score;
    std::vector<std::uint64_t> keys = ngram_keys(summary, table.n);
    if (keys.empty()) {
        score.degenerate = true;
        return score;
    }
    if (semantics == OverlapSemantics::set) {
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    }
    score.distinct_ngrams = keys.size();
    for (std::uint64_t key : keys) {
        if (table.contains(key)) ++score.matched;
    }
    score.percent = 100.0 * static_cast<double>(score.matched) /
                    static_cast<double>(score.distinct_ngrams);
    return score;
}

std::vector<OverlapScore> score_dataset(const Dataset& test, const NGramTable& table,
                                        const TokenizerConfig& config,
                                        OverlapSemantics semantics) {
    std::vector<OverlapScore> scores;
    scores.reserve(test.samples.size());
    for (const Sample& s : test.samples) {
        OverlapScore score = percent_overlap(tokenize(s.summary, config), table, semantics);
        score.sample_id = s.id;
        scores.push_back(std::move(score));
    }
    return scores;
}

namespace {

constexpr char kMagic[8] = {'L', 'X', 'D', 'V', 'N', 'G', 'T', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
    std::array<unsigned char, 4> b;
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b.data()), b.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<unsigned char, 8> b;
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b.data()), b.size());
}

std::uint32_t get_u32(std::istream& in) {
    std::array<unsigned char, 4> b;
    in.read(reinterpret_cast<char*>(b.data()), b.size());
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& in) {
    std::array<unsigned char, 8> b;
    in.read(reinterpret_cast<char*>(b.data()), b.size());
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

}  // namespace

void save_table(const NGramTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write table file: " + path);
    out.write(kMagic, sizeof(kMagic));
    put_u32(out, static_cast<std::uint32_t>(table.n));
    put_u64(out, table.config_hash);
    put_u64(out, table.corpus_hash);
    put_u64(out, table.total_summaries);
    put_u64(out, table.total_instances);
    put_u64(out, table.counts.size());

    std::vector<std::pair<std::uint64_t, std::uint64_t>> entries(table.counts.begin(),
                                                                 table.counts.end());
    std::sort(entries.begin(), entries.end());
    for (const auto& [key, count] : entries) {
        put_u64(out, key);
        put_u64(out, count);
    }
    if (!out) throw io_error("write failed: " + path);
}

NGramTable load_table(const std::string& path, std::uint64_t expected_config_hash) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open table file: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw parse_error("not an n-gram table file: " + path);
    }
    NGramTable table;
    table.n = static_cast<int>(get_u32(in));
    table.config_hash = get_u64(in);
    table.corpus_hash = get_u64(in);
    table.total_summaries = get_u64(in);
    table.total_instances = get_u64(in);
    std::uint64_t entry_count = get_u64(in);
    if (table.config_hash != expected_config_hash) {
        throw validation_error("table " + path +
                               " was built under a different tokenizer configuration");
    }
    table.counts.reserve(entry_count);
    for (std::uint64_t i = 0; i < entry_count; ++i) {
        std::uint64_t key = get_u64(in);
        std::uint64_t count = get_u64(in);
        table.counts.emplace(key, count);
    }
    if (!in) throw parse_error("truncated table file: " + path);
    return table;
}

}  // namespace lexdiv
