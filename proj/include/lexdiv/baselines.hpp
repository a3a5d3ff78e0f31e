#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexdiv/corpus.hpp"
#include "lexdiv/metrics.hpp"

namespace lexdiv {

struct SummarizerOutput {
    std::string sample_id;
    std::string summary;
    std::string policy;

    // provenance, enough to reconstruct the output from the corpora
    std::string retrieved_id;                    // retrieval
    double similarity = 0.0;                     // retrieval
    bool zero_similarity = false;                // retrieval: no shared vocabulary
    std::vector<std::size_t> sentence_indices;   // lead / oracle / pseudo
    bool empty_selection = false;                // oracle: nothing improved the score
};

// Inverted index over training documents with log-scaled term frequency and
// smoothed inverse document frequency:
//   w(t, d) = (1 + ln tf(t, d)) * (ln((1 + N) / (1 + df(t))) + 1)
// Vectors are L2-normalized; similarity is the cosine. Query terms outside
// the training vocabulary are dropped.
class TfIdfIndex {
  public:
    TfIdfIndex(const Dataset& train, const TokenizerConfig& config = {});

    // (training sample index, cosine similarity); ties and the all-zero case
    // go to the lowest index.
    std::pair<std::size_t, double> best_match(std::string_view document) const;

    std::size_t num_documents() const { return num_docs_; }

  private:
    struct Posting {
        std::uint32_t doc;
        double weight;  // normalized
    };
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    std::unordered_map<std::string, double> idf_;
    std::size_t num_docs_ = 0;
    TokenizerConfig config_;
};

// Copies the training summary of the nearest training document outright.
SummarizerOutput retrieval_summarize(const Sample& test_sample, const Dataset& train,
                                     const TfIdfIndex& index);

// First min(k, sentence count) sentences, original order.
SummarizerOutput lead_k(const Sample& sample, int k);

// Greedy sentence selection maximizing ROUGE-2 F1 against the reference;
// stops when nothing improves or the cap is reached, lowest index on ties.
SummarizerOutput extractive_oracle(const Sample& sample, int max_sentences);

enum class R1Component { recall, precision, f1 };

struct PseudoSummary {
    std::string summary;  // the selected sentence
    std::string remainder;
    std::size_t sentence_index = 0;
};

// The sentence maximizing ROUGE-1 against the rest of the document, plus the
// document with that sentence removed. Requires >= 2 sentences.
PseudoSummary pseudo_summary(std::string_view document,
                             R1Component component = R1Component::f1);

}  // namespace lexdiv
