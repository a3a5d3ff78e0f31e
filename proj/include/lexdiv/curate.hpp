#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "lexdiv/ngram.hpp"

namespace lexdiv {

enum class SelectionPolicy { repetition_bounded, highest_repetition, random };

std::string to_string(SelectionPolicy policy);

// No repetition bound at all (theta sentinel).
constexpr std::uint64_t kUnboundedTheta = std::numeric_limits<std::uint64_t>::max();

struct SubsetSelection {
    SelectionPolicy policy = SelectionPolicy::repetition_bounded;
    std::uint64_t theta = kUnboundedTheta;  // kUnboundedTheta when not applicable
    std::uint64_t seed = 0;
    std::vector<std::string> retained_ids;  // visitation order
    std::uint64_t max_ngram_count = 0;      // audit: final max count in the subset
};

struct CurateOptions {
    // When set, an n-gram occurring k times inside one summary contributes 1
    // to the threshold check instead of k.
    bool distinct_per_sample = false;
};

// Visits samples in seeded-shuffle order and keeps one iff adding its summary
// n-grams leaves every occurrence count <= theta. Single pass; rejected
// samples are not revisited.
SubsetSelection select_repetition_bounded(const Dataset& train, int n, std::uint64_t theta,
                                          std::uint64_t seed, const TokenizerConfig& config = {},
                                          const CurateOptions& options = {});

// Top `size` samples by the maximum corpus-wide occurrence count over the
// sample's summary n-grams; ties fall back to dataset order.
SubsetSelection select_highest_repetition(const Dataset& train, int n, std::size_t size,
                                          const TokenizerConfig& config = {});

// Seeded uniform sample of `size` ids without replacement.
SubsetSelection select_random(const Dataset& train, std::size_t size, std::uint64_t seed);

// Recounts n-grams over the retained summaries (under the same multiplicity
// rule) and returns the maximum occurrence count found. Used as the
// selection post-condition check.
std::uint64_t recount_max_ngram(const Dataset& train, const SubsetSelection& selection, int n,
                                const TokenizerConfig& config = {},
                                const CurateOptions& options = {});

}  // namespace lexdiv
