#include "lexdiv/partition.hpp"

#include <algorithm>

#include "lexdiv/error.hpp"

namespace lexdiv {

std::size_t PartitionSet::total_samples() const {
    std::size_t total = 0;
    for (const Bin& b : bins) total += b.size();
    return total;
}

std::size_t PartitionSet::bin_index(double percent) const {
    for (std::size_t i = 0; i < bins.size(); ++i) {
        if (bins[i].contains(percent)) return i;
    }
    // percent < 0 cannot happen for well-formed scores; the last bin is open.
    return bins.size() - 1;
}

namespace {

void assign_samples(PartitionSet& set, const std::vector<OverlapScore>& scores) {
    for (const OverlapScore& s : scores) {
        set.bins[set.bin_index(s.percent)].sample_ids.push_back(s.sample_id);
    }
}

}  // namespace

PartitionSet partition(const std::vector<OverlapScore>& scores, std::size_t min_samples) {
    if (scores.empty()) throw argument_error("cannot partition an empty score list");
    if (min_samples < 1) throw argument_error("min_samples must be >= 1");

    auto count_in = [&scores](double lower, double upper) {
        std::size_t c = 0;
        for (const OverlapScore& s : scores) {
            if (s.percent >= lower && s.percent < upper) ++c;
        }
        return c;
    };
    auto count_from = [&scores](double lower) {
        std::size_t c = 0;
        for (const OverlapScore& s : scores) {
            if (s.percent >= lower) ++c;
        }
        return c;
    };

    PartitionSet set;
    double lower = 0.0;
    while (true) {
        double upper = lower + 5.0;
        while (upper < 100.0 && count_in(lower, upper) < min_samples) upper += 5.0;
        if (upper >= 100.0) {
            Bin open;
            open.lower = lower;
            set.bins.push_back(std::move(open));
            break;
        }
        Bin bin;
        bin.lower = lower;
        bin.upper = upper;
        set.bins.push_back(std::move(bin));
        lower = upper;
    }

    // Undersized open tail folds into its predecessor.
    if (set.bins.size() > 1 && count_from(set.bins.back().lower) < min_samples) {
        set.bins.pop_back();
        set.bins.back().upper.reset();
    }

    assign_samples(set, scores);
    return set;
}

PartitionSet partition_fixed(const std::vector<OverlapScore>& scores,
                             const std::vector<double>& boundaries) {
    if (scores.empty()) throw argument_error("cannot partition an empty score list");
    if (boundaries.empty()) throw argument_error("boundaries must be non-empty");
    if (boundaries.front() != 0.0) throw argument_error("boundaries must start at 0");
    for (std::size_t i = 1; i < boundaries.size(); ++i) {
        if (boundaries[i] <= boundaries[i - 1]) {
            throw argument_error("boundaries must be strictly increasing");
        }
    }

    PartitionSet set;
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        Bin bin;
        bin.lower = boundaries[i];
        if (i + 1 < boundaries.size()) bin.upper = boundaries[i + 1];
        set.bins.push_back(std::move(bin));
    }
    assign_samples(set, scores);
    return set;
}

}  // namespace lexdiv
