#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexdiv/corpus.hpp"

namespace lexdiv {

// 64-bit FNV-1a over the token bytes.
std::uint64_t hash_token(std::string_view token);

// Order-sensitive combination of n token hashes into one n-gram key.
std::uint64_t combine_ngram(const std::uint64_t* token_hashes, int n);

// All contiguous n-gram keys of the sequence, in order (may repeat).
std::vector<std::uint64_t> ngram_keys(const TokenSeq& tokens, int n);

// Multiset of n-grams keyed by hash. n must be >= 1.
std::unordered_map<std::uint64_t, std::uint32_t> extract_ngrams(const TokenSeq& tokens, int n);

// Occurrence counts of n-grams over a summary collection. Keys are 64-bit
// n-gram hashes; collision checking is available while building.
struct NGramTable {
    int n = 4;
    std::unordered_map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t total_summaries = 0;
    std::uint64_t total_instances = 0;  // sum of counts
    std::uint64_t config_hash = 0;      // tokenizer configuration fingerprint
    std::uint64_t corpus_hash = 0;      // fingerprint of the indexed (id, summary) stream

    bool contains(std::uint64_t key) const { return counts.find(key) != counts.end(); }
    std::uint64_t count(std::uint64_t key) const {
        auto it = counts.find(key);
        return it == counts.end() ? 0 : it->second;
    }
};

class NGramTableBuilder {
  public:
    NGramTableBuilder(int n, const TokenizerConfig& config);

    // Keeps one exemplar string per key and throws on a 64-bit collision.
    // Meant for tests and debug runs; off by default.
    void set_collision_check(bool enabled) { check_collisions_ = enabled; }

    void add_summary(std::string_view id, std::string_view summary);
    NGramTable finish();

  private:
    int n_;
    TokenizerConfig config_;
    bool check_collisions_ = false;
    NGramTable table_;
    std::unordered_map<std::uint64_t, std::string> exemplars_;
};

// Counts every n-gram occurrence across every training summary.
// Throws on an empty dataset or a non-train split.
NGramTable build_table(const Dataset& train, int n, const TokenizerConfig& config = {});

enum class OverlapSemantics {
    set,      // distinct n-grams of the test summary (default)
    multiset  // every n-gram instance of the test summary
};

struct OverlapScore {
    std::string sample_id;
    double percent = 0.0;        // 100 * matched / distinct_ngrams
    std::uint64_t distinct_ngrams = 0;  // instances considered (distinct in set mode)
    std::uint64_t matched = 0;
    bool degenerate = false;  // summary shorter than n tokens
};

// Percent of the summary's n-grams that exist in the table's key set.
OverlapScore percent_overlap(const TokenSeq& summary, const NGramTable& table,
                             OverlapSemantics semantics = OverlapSemantics::set);

// Scores every sample's summary in dataset order.
std::vector<OverlapScore> score_dataset(const Dataset& test, const NGramTable& table,
                                        const TokenizerConfig& config = {},
                                        OverlapSemantics semantics = OverlapSemantics::set);

// Binary table persistence. The loader refuses a file whose stored tokenizer
// fingerprint differs from expected_config_hash.
void save_table(const NGramTable& table, const std::string& path);
NGramTable load_table(const std::string& path, std::uint64_t expected_config_hash);

}  // namespace lexdiv
