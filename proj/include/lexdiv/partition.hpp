#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lexdiv/ngram.hpp"

namespace lexdiv {

// Half-open percent-overlap bin [lower, upper); the final bin of a
// PartitionSet has no upper bound and absorbs everything >= lower.
struct Bin {
    double lower = 0.0;
    std::optional<double> upper;
    std::vector<std::string> sample_ids;  // input order

    bool open_ended() const { return !upper.has_value(); }
    bool contains(double percent) const {
        return percent >= lower && (!upper || percent < *upper);
    }
    std::size_t size() const { return sample_ids.size(); }
};

// Ordered disjoint bins jointly covering [0, 100]. The first bin holds the
// most novel test samples (T_nov), the last the most similar (T_sim).
struct PartitionSet {
    std::vector<Bin> bins;

    const Bin& t_nov() const { return bins.front(); }
    const Bin& t_sim() const { return bins.back(); }
    std::size_t total_samples() const;
    // Index of the bin containing the given percent.
    std::size_t bin_index(double percent) const;
};

// Greedy left-to-right construction: each bin starts at the previous upper
// bound with width 5 and widens in steps of 5 until it holds at least
// min_samples; the final bin is open-ended and merges backward if undersized.
PartitionSet partition(const std::vector<OverlapScore>& scores, std::size_t min_samples);

// Bins from explicit edges (strictly increasing, starting at 0); the last
// bin is open-ended above the final edge.
PartitionSet partition_fixed(const std::vector<OverlapScore>& scores,
                             const std::vector<double>& boundaries);

}  // namespace lexdiv
