#include "lexdiv/curate.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "lexdiv/error.hpp"
#include "lexdiv/rng.hpp"

namespace lexdiv {

std::string to_string(SelectionPolicy policy) {
    switch (policy) {
        case SelectionPolicy::repetition_bounded: return "repetition_bounded";
        case SelectionPolicy::highest_repetition: return "highest_repetition";
        case SelectionPolicy::random: return "random";
    }
    return "repetition_bounded";
}

namespace {

// Per-summary n-gram contribution under the configured multiplicity rule.
std::unordered_map<std::uint64_t, std::uint32_t> summary_ngrams(const Sample& sample, int n,
                                                                const TokenizerConfig& config,
                                                                bool distinct_per_sample) {
    auto grams = extract_ngrams(tokenize(sample.summary, config), n);
    if (distinct_per_sample) {
        for (auto& [key, count] : grams) count = 1;
    }
    return grams;
}

}  // namespace

SubsetSelection select_repetition_bounded(const Dataset& train, int n, std::uint64_t theta,
                                          std::uint64_t seed, const TokenizerConfig& config,
                                          const CurateOptions& options) {
    if (theta < 1) throw argument_error("theta must be >= 1");

    SubsetSelection sel;
    sel.policy = SelectionPolicy::repetition_bounded;
    sel.theta = theta;
    sel.seed = seed;

    std::unordered_map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t max_count = 0;

    for (std::size_t idx : shuffled_indices(train.samples.size(), seed)) {
        const Sample& sample = train.samples[idx];
        auto grams = summary_ngrams(sample, n, config, options.distinct_per_sample);

        bool fits = true;
        if (theta != kUnboundedTheta) {
            for (const auto& [key, count] : grams) {
                auto it = counts.find(key);
                std::uint64_t existing = it == counts.end() ? 0 : it->second;
                if (existing + count > theta) {
                    fits = false;
                    break;
                }
            }
        }
        if (!fits) continue;

        for (const auto& [key, count] : grams) {
            std::uint64_t updated = (counts[key] += count);
            max_count = std::max(max_count, updated);
        }
        sel.retained_ids.push_back(sample.id);
    }
    sel.max_ngram_count = max_count;
    return sel;
}

SubsetSelection select_highest_repetition(const Dataset& train, int n, std::size_t size,
                                          const TokenizerConfig& config) {
    if (size < 1 || size > train.samples.size()) {
        throw argument_error("size must be in [1, " + std::to_string(train.samples.size()) + "]");
    }

    NGramTable table = build_table(train, n, config);

    // key = max corpus-wide count over the sample's own summary n-grams
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed(train.samples.size());
    for (std::size_t i = 0; i < train.samples.size(); ++i) {
        std::uint64_t key = 0;
        for (std::uint64_t g : ngram_keys(tokenize(train.samples[i].summary, config), n)) {
            key = std::max(key, table.count(g));
        }
        keyed[i] = {key, i};
    }
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    SubsetSelection sel;
    sel.policy = SelectionPolicy::highest_repetition;
    sel.theta = kUnboundedTheta;
    std::uint64_t max_count = 0;
    for (std::size_t i = 0; i < size; ++i) {
        sel.retained_ids.push_back(train.samples[keyed[i].second].id);
        max_count = std::max(max_count, keyed[i].first);
    }
    sel.max_ngram_count = max_count;
    return sel;
}

SubsetSelection select_random(const Dataset& train, std::size_t size, std::uint64_t seed) {
    if (size < 1 || size > train.samples.size()) {
        throw argument_error("size must be in [1, " + std::to_string(train.samples.size()) + "]");
    }
    SubsetSelection sel;
    sel.policy = SelectionPolicy::random;
    sel.theta = kUnboundedTheta;
    sel.seed = seed;
    std::vector<std::size_t> order = shuffled_indices(train.samples.size(), seed);
    for (std::size_t i = 0; i < size; ++i) {
        sel.retained_ids.push_back(train.samples[order[i]].id);
    }
    return sel;
}

std::uint64_t recount_max_ngram(const Dataset& train, const SubsetSelection& selection, int n,
                                const TokenizerConfig& config, const CurateOptions& options) {
    std::unordered_set<std::string> retained(selection.retained_ids.begin(),
                                             selection.retained_ids.end());
    std::unordered_map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t max_count = 0;
    for (const Sample& s : train.samples) {
        if (!retained.count(s.id)) continue;
        for (const auto& [g, c] : summary_ngrams(s, n, config, options.distinct_per_sample)) {
            max_count = std::max(max_count, counts[g] += c);
        }
    }
    return max_count;
}

}  // namespace lexdiv
