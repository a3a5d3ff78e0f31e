#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexdiv/baselines.hpp"
#include "lexdiv/metrics.hpp"
#include "lexdiv/partition.hpp"

namespace lexdiv {

struct BinReport {
    double lower = 0.0;
    std::optional<double> upper;      // absent for the open-ended bin
    std::size_t count = 0;            // samples evaluated in this bin
    std::size_t entity_absent = 0;    // samples excluded from entity means
    std::optional<double> r2;         // mean ROUGE-2 F1
    std::optional<double> e_rec;
    std::optional<double> e_prc;
    std::optional<double> e_rem;
};

struct EvaluationReport {
    int schema_version = 1;
    std::uint64_t config_fingerprint = 0;
    bool normalized = false;
    std::vector<BinReport> bins;
    BinReport corpus;  // bounds unused; count is the evaluated test set size
};

struct EvaluateOptions {
    TokenizerConfig tokenizer;
    RougeOptions rouge;
    EntityDenominator denominator = EntityDenominator::generated;
};

// Per-sample ROUGE-2 and entity metrics aggregated per partition bin by
// arithmetic mean. Every output id must be a test id and every test sample
// must have an output; both violations throw with the offending ids.
EvaluationReport evaluate(const std::vector<SummarizerOutput>& outputs, const Dataset& test,
                          const PartitionSet& partitions, const EntityExtractor& extractor,
                          const EvaluateOptions& options = {});

// Each bin metric divided by the baseline's same-bin value; absent where the
// baseline is zero or either side is undefined. Bin structures must match.
EvaluationReport normalize(const EvaluationReport& report, const EvaluationReport& baseline);

enum class InterventionMode { substitute, add };
enum class InterventionOutcome { pending, correct, skipped, incorrect };

std::string to_string(InterventionMode mode);
std::string to_string(InterventionOutcome outcome);
InterventionMode intervention_mode_from_string(std::string_view name);
InterventionOutcome intervention_outcome_from_string(std::string_view name);

struct InterventionCase {
    std::string case_id;  // "<sample_id>#<k>"
    std::string sample_id;
    InterventionMode mode = InterventionMode::substitute;
    std::optional<std::string> old_entity;  // substitute only
    std::string new_entity;
    std::string edited_document;
    InterventionOutcome outcome = InterventionOutcome::pending;
};

struct InterventionOptions {
    std::size_t entity_pool = 2000;  // most frequent training entities considered
    std::string add_template = "{entity} is confirmed.";
    std::unordered_map<std::string, std::string> replacements;  // old surface -> replacement
    TokenizerConfig tokenizer;
};

struct InterventionSet {
    std::vector<InterventionCase> cases;
    std::vector<std::string> skipped;  // draws that could not produce a usable edit
};

// Ranks training-summary entities by mention frequency, samples `count` that
// also appear in reference test summaries, and edits each drawn sample's
// document: substitute when the entity is present in the source (two cases
// with distinct replacements of the same pattern class), add otherwise.
InterventionSet make_interventions(const Dataset& test, const Dataset& train,
                                   const EntityExtractor& extractor, std::size_t count,
                                   std::uint64_t seed, const InterventionOptions& options = {});

// new present and old absent -> correct; old present -> incorrect
// (regardless of new); neither -> skipped. Presence is the token-level
// entity containment rule.
InterventionOutcome classify_intervention(std::string_view generated,
                                          const std::optional<std::string>& old_entity,
                                          std::string_view new_entity,
                                          const StopwordSet& stopwords = StopwordSet::builtin());

struct InterventionScore {
    std::size_t total = 0;
    std::size_t correct = 0;
    std::size_t skipped = 0;
    std::size_t incorrect = 0;

    double correct_pct() const { return total ? 100.0 * correct / total : 0.0; }
    double skipped_pct() const { return total ? 100.0 * skipped / total : 0.0; }
    double incorrect_pct() const { return total ? 100.0 * incorrect / total : 0.0; }
};

// Joins generated summaries (keyed by case_id, falling back to sample_id)
// against the cases and tallies the three outcomes.
InterventionScore score_interventions(
    const std::vector<InterventionCase>& cases,
    const std::unordered_map<std::string, std::string>& generated_by_id,
    const StopwordSet& stopwords = StopwordSet::builtin());

enum class ReportFormat { csv, json };

// Deterministic rendering: stable column order, floats with 4 decimals.
std::string render_report(const EvaluationReport& report, ReportFormat format);
void export_report(const EvaluationReport& report, ReportFormat format, const std::string& path);
EvaluationReport import_report(const std::string& path);

}  // namespace lexdiv
