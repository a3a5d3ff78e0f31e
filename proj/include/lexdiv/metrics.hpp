#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lexdiv/corpus.hpp"

namespace lexdiv {

struct RougeScore {
    int n = 1;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct RougeOptions {
    bool stemming = false;  // s-stemmer suffix stripping before n-gram counting
};

// Clipped n-gram matching: match = sum over distinct n-grams of
// min(candidate count, reference count). Degenerate totals give 0.
RougeScore rouge_n(const TokenSeq& candidate, const TokenSeq& reference, int n,
                   const RougeOptions& options = {});
RougeScore rouge_n(std::string_view candidate, std::string_view reference, int n,
                   const RougeOptions& options = {});

// Harman s-stemmer ("ies"->"y", strip plural "s"/"es" with guards).
std::string s_stem(std::string_view word);

extern const char* const kStopwordsVersion;

class StopwordSet {
  public:
    static const StopwordSet& builtin();
    static StopwordSet from_file(const std::string& path);
    explicit StopwordSet(std::vector<std::string> words);

    bool contains(std::string_view folded_word) const;
    std::size_t size() const { return words_.size(); }

  private:
    std::unordered_set<std::string> words_;
};

struct EntityMention {
    std::string surface;                      // original text slice
    std::vector<std::string> content_tokens;  // folded, stop words removed, non-empty
    std::string type;                         // "name" | "numeric" | "year" | "" (precomputed)

    std::string signature() const;  // content tokens joined; dedup key
};

class EntityExtractor {
  public:
    virtual ~EntityExtractor() = default;
    // sample_id/field identify the text for annotation lookups; the
    // heuristic extractor ignores them.
    virtual std::vector<EntityMention> extract(std::string_view text, std::string_view sample_id,
                                               std::string_view field) const = 0;

    std::vector<EntityMention> extract(std::string_view text) const {
        return extract(text, "", "");
    }
};

// Capitalized-run and numeric-expression extractor. A run of capitalized
// words is kept whole even when it opens a sentence; a single sentence-
// initial word only counts when it recurs capitalized mid-sentence elsewhere
// in the same text. Numeric expressions are runs of digit-bearing tokens
// joined across whitespace or one of - / . : ,
class HeuristicExtractor : public EntityExtractor {
  public:
    explicit HeuristicExtractor(const StopwordSet* stopwords = nullptr);
    std::vector<EntityMention> extract(std::string_view text, std::string_view sample_id,
                                       std::string_view field) const override;

  private:
    const StopwordSet* stopwords_;
    SentenceSplitter splitter_;
};

// Reads mentions from a sidecar JSON-lines file: {id, field, mentions: [..]}.
class PrecomputedExtractor : public EntityExtractor {
  public:
    static PrecomputedExtractor from_file(const std::string& path,
                                          const StopwordSet* stopwords = nullptr);
    std::vector<EntityMention> extract(std::string_view text, std::string_view sample_id,
                                       std::string_view field) const override;

    void add(const std::string& sample_id, const std::string& field,
             const std::vector<std::string>& mentions, const StopwordSet& stopwords);

  private:
    std::unordered_map<std::string, std::vector<EntityMention>> mentions_;  // "id\x1ffield"
};

// Folded token set of a text; backs the token-level containment test.
class TokenBag {
  public:
    explicit TokenBag(std::string_view text, const TokenizerConfig& config = {});
    bool contains(std::string_view folded_token) const;
    bool contains_all(const std::vector<std::string>& content_tokens) const;

  private:
    std::unordered_set<std::string> tokens_;
};

// An entity is present in a text iff every content token occurs in the
// text's folded token set.
bool entity_present(const EntityMention& mention, const TokenBag& bag);

enum class EntityDenominator { generated, reference };

struct EntityMetricOptions {
    EntityDenominator denominator = EntityDenominator::generated;
    TokenizerConfig tokenizer;
};

struct JudgedEntity {
    EntityMention mention;
    bool in_reference = false;
    bool in_source = false;
};

struct EntityMetricRecord {
    std::string sample_id;
    std::optional<double> e_rec;  // % of generated entities in reference AND source
    std::optional<double> e_prc;  // % of generated entities in source
    std::optional<double> e_rem;  // % of generated entities in reference but NOT source
    std::size_t n_gen = 0;        // generated entity count (the denominator)
    std::vector<JudgedEntity> gen_entities;
    std::vector<EntityMention> ref_entities;
    std::vector<EntityMention> src_entities;
};

EntityMetricRecord entity_metrics(std::string_view generated, std::string_view reference,
                                  std::string_view source, const EntityExtractor& extractor,
                                  std::string_view sample_id = "",
                                  const EntityMetricOptions& options = {});

}  // namespace lexdiv
