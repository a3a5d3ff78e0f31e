#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lexdiv {

// One (id, document, reference summary) record.
struct Sample {
    std::string id;
    std::string document;
    std::string summary;
    std::map<std::string, std::string> meta;
    bool empty_summary_flagged = false;  // set by lenient loading only
};

enum class Split { train, validation, test };

std::string to_string(Split split);
Split split_from_string(std::string_view name);

struct Dataset {
    std::string name;
    Split split = Split::train;
    std::vector<Sample> samples;  // exactly file order

    const Sample* find(std::string_view id) const;
};

// Byte range of a token in the text it was cut from.
struct TokenSpan {
    std::size_t offset = 0;
    std::size_t length = 0;
};

struct TokenSeq {
    std::vector<std::string> tokens;
    std::vector<TokenSpan> spans;  // parallel to tokens

    std::size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }
};

struct TokenizerConfig {
    bool case_fold = true;

    // Stable hash of the configuration; stamped into n-gram tables so a
    // persisted table can refuse to load under a different tokenizer.
    std::uint64_t fingerprint() const;
};

// Tokens are maximal runs of letters/digits, with a single apostrophe
// allowed between letters. Everything else separates. Folding (when on)
// covers ASCII, Latin-1, Greek and Cyrillic simple case pairs.
TokenSeq tokenize(std::string_view text, const TokenizerConfig& config = {});

// Case folding applied to a whole UTF-8 string, same mapping as tokenize().
std::string fold_case(std::string_view text);

class SentenceSplitter {
  public:
    SentenceSplitter();  // built-in abbreviation guards (Mr, Mrs, Dr, U.S, St, ...)
    explicit SentenceSplitter(std::vector<std::string> abbreviations);

    static SentenceSplitter from_file(const std::string& path);

    // Boundaries at . ! ? followed by whitespace and an uppercase letter or
    // digit, unless the dotted word is a guarded abbreviation. Sentences are
    // trimmed; text with no terminator comes back as one sentence.
    std::vector<std::string> split(std::string_view text) const;

    // Same segmentation, but returns byte offsets of each sentence start
    // within the input. Needed by the entity extractor.
    std::vector<std::size_t> sentence_starts(std::string_view text) const;

  private:
    std::vector<std::string> abbreviations_;
    bool is_abbreviation(std::string_view word) const;
    std::vector<std::pair<std::size_t, std::size_t>> segment(std::string_view text) const;
};

std::vector<std::string> split_sentences(std::string_view text);

struct LoadOptions {
    bool lenient = false;  // load empty-summary records flagged instead of rejecting
};

// JSON-lines loader. Each line: {"id": ..., "document": ..., "summary": ...};
// extra string fields are preserved into meta. Duplicate ids and missing
// fields are validation errors, malformed lines are parse errors, both with
// 1-based line numbers.
Dataset load_jsonl(const std::string& path, Split split, const LoadOptions& options = {});

// Parses records from an in-memory buffer (the file loader is a thin wrapper).
Dataset load_jsonl_text(std::string_view text, Split split, const LoadOptions& options = {},
                        const std::string& origin = "<memory>");

}  // namespace lexdiv
