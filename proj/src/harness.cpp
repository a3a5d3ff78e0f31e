#include "lexdiv/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "lexdiv/error.hpp"
#include "lexdiv/rng.hpp"
#include "nlohmann/json.hpp"

namespace lexdiv {

namespace {

struct MeanAccumulator {
    double sum = 0.0;
    std::size_t count = 0;
    void add(double v) {
        sum += v;
        ++count;
    }
    std::optional<double> mean() const {
        if (count == 0) return std::nullopt;
        return sum / static_cast<double>(count);
    }
};

std::uint64_t fingerprint_config(const EvaluateOptions& options) {
    std::uint64_t h = options.tokenizer.fingerprint();
    auto mix = [&h](std::uint64_t v) {
        h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    };
    mix(options.rouge.stemming ? 1 : 0);
    mix(options.denominator == EntityDenominator::generated ? 0 : 1);
    mix(hash_token(kStopwordsVersion));
    return h;
}

}  // namespace

EvaluationReport evaluate(const std::vector<SummarizerOutput>& outputs, const Dataset& test,
                          const PartitionSet& partitions, const EntityExtractor& extractor,
                          const EvaluateOptions& options) {
    std::unordered_map<std::string, const SummarizerOutput*> by_id;
    for (const SummarizerOutput& out : outputs) {
        if (!test.find(out.sample_id)) {
            throw validation_error("output id '" + out.sample_id + "' is not in the test set");
        }
        by_id[out.sample_id] = &out;
    }
    {
        std::vector<std::string> missing;
        for (const Sample& s : test.samples) {
            if (!by_id.count(s.id)) missing.push_back(s.id);
        }
        if (!missing.empty()) {
            std::string msg = "missing outputs for " + std::to_string(missing.size()) + " ids:";
            for (std::size_t i = 0; i < missing.size() && i < 20; ++i) msg += " " + missing[i];
            throw validation_error(msg);
        }
    }

    std::unordered_map<std::string, std::size_t> bin_of;
    for (std::size_t b = 0; b < partitions.bins.size(); ++b) {
        for (const std::string& id : partitions.bins[b].sample_ids) bin_of[id] = b;
    }

    const std::size_t nbins = partitions.bins.size();
    std::vector<MeanAccumulator> bin_r2(nbins), bin_rec(nbins), bin_prc(nbins), bin_rem(nbins);
    std::vector<std::size_t> bin_count(nbins, 0), bin_absent(nbins, 0);
    MeanAccumulator all_r2, all_rec, all_prc, all_rem;
    std::size_t all_absent = 0;

    for (const Sample& s : test.samples) {
        auto bin_it = bin_of.find(s.id);
        if (bin_it == bin_of.end()) {
            throw validation_error("partitions do not cover test id '" + s.id + "'");
        }
        std::size_t b = bin_it->second;
        const SummarizerOutput& out = *by_id.at(s.id);

        double r2 = rouge_n(tokenize(out.summary, options.tokenizer),
                            tokenize(s.summary, options.tokenizer), 2, options.rouge)
                        .f1;
        bin_r2[b].add(r2);
        all_r2.add(r2);
        ++bin_count[b];

        EntityMetricOptions em_options;
        em_options.denominator = options.denominator;
        em_options.tokenizer = options.tokenizer;
        EntityMetricRecord em =
            entity_metrics(out.summary, s.summary, s.document, extractor, s.id, em_options);
        if (em.e_rec) {
            bin_rec[b].add(*em.e_rec);
            bin_prc[b].add(*em.e_prc);
            bin_rem[b].add(*em.e_rem);
            all_rec.add(*em.e_rec);
            all_prc.add(*em.e_prc);
            all_rem.add(*em.e_rem);
        } else {
            ++bin_absent[b];
            ++all_absent;
        }
    }

    EvaluationReport report;
    report.config_fingerprint = fingerprint_config(options);
    for (std::size_t b = 0; b < nbins; ++b) {
        BinReport br;
        br.lower = partitions.bins[b].lower;
        br.upper = partitions.bins[b].upper;
        br.count = bin_count[b];
        br.entity_absent = bin_absent[b];
        br.r2 = bin_r2[b].mean();
        br.e_rec = bin_rec[b].mean();
        br.e_prc = bin_prc[b].mean();
        br.e_rem = bin_rem[b].mean();
        report.bins.push_back(std::move(br));
    }
    report.corpus.count = all_r2.count;
    report.corpus.entity_absent = all_absent;
    report.corpus.r2 = all_r2.mean();
    report.corpus.e_rec = all_rec.mean();
    report.corpus.e_prc = all_prc.mean();
    report.corpus.e_rem = all_rem.mean();
    return report;
}

namespace {

std::optional<double> safe_ratio(const std::optional<double>& value,
                                 const std::optional<double>& base) {
    if (!value || !base || *base == 0.0) return std::nullopt;
    return *value / *base;
}

}  // namespace

EvaluationReport normalize(const EvaluationReport& report, const EvaluationReport& baseline) {
    if (report.bins.size() != baseline.bins.size()) {
        throw validation_error("bin structure mismatch: " + std::to_string(report.bins.size()) +
                               " vs " + std::to_string(baseline.bins.size()) + " bins");
    }
    for (std::size_t b = 0; b < report.bins.size(); ++b) {
        const BinReport& a = report.bins[b];
        const BinReport& c = baseline.bins[b];
        if (a.lower != c.lower || a.upper.has_value() != c.upper.has_value() ||
            (a.upper && *a.upper != *c.upper)) {
            throw validation_error("bin structure mismatch at bin " + std::to_string(b));
        }
    }

    EvaluationReport out = report;
    out.normalized = true;
    for (std::size_t b = 0; b < out.bins.size(); ++b) {
        BinReport& br = out.bins[b];
        const BinReport& base = baseline.bins[b];
        br.r2 = safe_ratio(br.r2, base.r2);
        br.e_rec = safe_ratio(br.e_rec, base.e_rec);
        br.e_prc = safe_ratio(br.e_prc, base.e_prc);
        br.e_rem = safe_ratio(br.e_rem, base.e_rem);
    }
    out.corpus.r2 = safe_ratio(out.corpus.r2, baseline.corpus.r2);
    out.corpus.e_rec = safe_ratio(out.corpus.e_rec, baseline.corpus.e_rec);
    out.corpus.e_prc = safe_ratio(out.corpus.e_prc, baseline.corpus.e_prc);
    out.corpus.e_rem = safe_ratio(out.corpus.e_rem, baseline.corpus.e_rem);
    return out;
}

std::string to_string(InterventionMode mode) {
    return mode == InterventionMode::substitute ? "substitute" : "add";
}

std::string to_string(InterventionOutcome outcome) {
    switch (outcome) {
        case InterventionOutcome::pending: return "pending";
        case InterventionOutcome::correct: return "correct";
        case InterventionOutcome::skipped: return "skipped";
        case InterventionOutcome::incorrect: return "incorrect";
    }
    return "pending";
}

InterventionMode intervention_mode_from_string(std::string_view name) {
    if (name == "substitute") return InterventionMode::substitute;
    if (name == "add") return InterventionMode::add;
    throw argument_error("unknown intervention mode '" + std::string(name) + "'");
}

InterventionOutcome intervention_outcome_from_string(std::string_view name) {
    if (name == "pending") return InterventionOutcome::pending;
    if (name == "correct") return InterventionOutcome::correct;
    if (name == "skipped") return InterventionOutcome::skipped;
    if (name == "incorrect") return InterventionOutcome::incorrect;
    throw argument_error("unknown intervention outcome '" + std::string(name) + "'");
}

namespace {

struct RankedEntity {
    EntityMention mention;
    std::size_t freq = 0;
    std::size_t first_index = 0;
};

// Contiguous folded-token-sequence matches of `needle` inside the document
// token stream; returns byte ranges to splice.
std::vector<std::pair<std::size_t, std::size_t>> find_token_matches(
    const TokenSeq& doc, const std::vector<std::string>& needle) {
    std::vector<std::pair<std::size_t, std::size_t>> matches;
    if (needle.empty() || doc.size() < needle.size()) return matches;
    for (std::size_t i = 0; i + needle.size() <= doc.size();) {
        bool hit = true;
        for (std::size_t j = 0; j < needle.size(); ++j) {
            if (doc.tokens[i + j] != needle[j]) {
                hit = false;
                break;
            }
        }
        if (hit) {
            std::size_t begin = doc.spans[i].offset;
            const TokenSpan& last = doc.spans[i + needle.size() - 1];
            matches.emplace_back(begin, last.offset + last.length);
            i += needle.size();
        } else {
            ++i;
        }
    }
    return matches;
}

std::string splice(std::string_view text,
                   const std::vector<std::pair<std::size_t, std::size_t>>& ranges,
                   std::string_view replacement) {
    std::string out;
    std::size_t pos = 0;
    for (const auto& [begin, end] : ranges) {
        out += text.substr(pos, begin - pos);
        out += replacement;
        pos = end;
    }
    out += text.substr(pos);
    return out;
}

std::string apply_template(std::string_view templ, std::string_view entity) {
    std::string out(templ);
    std::size_t at = out.find("{entity}");
    if (at != std::string::npos) out.replace(at, 8, entity);
    return out;
}

}  // namespace

InterventionSet make_interventions(const Dataset& test, const Dataset& train,
                                   const EntityExtractor& extractor, std::size_t count,
                                   std::uint64_t seed, const InterventionOptions& options) {
    if (count < 1) throw argument_error("count must be >= 1");

    // rank training-summary entities by mention frequency
    std::unordered_map<std::string, std::size_t> rank_of;
    std::vector<RankedEntity> ranked;
    for (std::size_t i = 0; i < train.samples.size(); ++i) {
        const Sample& s = train.samples[i];
        for (const EntityMention& m : extractor.extract(s.summary, s.id, "summary")) {
            auto [it, inserted] = rank_of.emplace(m.signature(), ranked.size());
            if (inserted) {
                ranked.push_back({m, 1, i});
            } else {
                ++ranked[it->second].freq;
            }
        }
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const RankedEntity& a, const RankedEntity& b) {
        if (a.freq != b.freq) return a.freq > b.freq;
        return a.first_index < b.first_index;
    });
    if (ranked.size() > options.entity_pool) ranked.resize(options.entity_pool);

    // test-side bags
    std::vector<TokenBag> ref_bags, doc_bags;
    ref_bags.reserve(test.samples.size());
    doc_bags.reserve(test.samples.size());
    for (const Sample& s : test.samples) {
        ref_bags.emplace_back(s.summary, options.tokenizer);
        doc_bags.emplace_back(s.document, options.tokenizer);
    }

    // entities that also appear in reference test summaries
    std::vector<std::size_t> eligible;
    for (std::size_t e = 0; e < ranked.size(); ++e) {
        for (const TokenBag& bag : ref_bags) {
            if (entity_present(ranked[e].mention, bag)) {
                eligible.push_back(e);
                break;
            }
        }
    }
    if (eligible.size() < count) {
        throw validation_error("entity pool too small: " + std::to_string(eligible.size()) +
                               " eligible entities, need " + std::to_string(count));
    }

    SplitMix64 rng(seed);
    fisher_yates_shuffle(eligible, rng);
    eligible.resize(count);

    InterventionSet result;
    std::unordered_map<std::string, std::size_t> case_counter;
    auto next_case_id = [&case_counter](const std::string& sample_id) {
        std::size_t k = case_counter[sample_id]++;
        return sample_id + "#" + std::to_string(k);
    };

    for (std::size_t e : eligible) {
        const EntityMention& entity = ranked[e].mention;

        std::vector<std::size_t> candidates;
        for (std::size_t t = 0; t < test.samples.size(); ++t) {
            if (entity_present(entity, ref_bags[t])) candidates.push_back(t);
        }
        std::size_t t = candidates[rng.next_below(candidates.size())];
        const Sample& sample = test.samples[t];

        if (!entity_present(entity, doc_bags[t])) {
            // fact absent from the source: add it
            InterventionCase c;
            c.case_id = next_case_id(sample.id);
            c.sample_id = sample.id;
            c.mode = InterventionMode::add;
            c.new_entity = entity.surface;
            c.edited_document =
                apply_template(options.add_template, entity.surface) + " " + sample.document;
            result.cases.push_back(std::move(c));
            continue;
        }

        // fact present: substitute it
        TokenSeq doc_tokens = tokenize(sample.document, options.tokenizer);
        std::vector<std::string> needle = tokenize(entity.surface, options.tokenizer).tokens;
        auto matches = find_token_matches(doc_tokens, needle);
        if (matches.empty()) {
            result.skipped.push_back("entity '" + entity.surface + "' has no contiguous match in " +
                                     sample.id);
            continue;
        }

        std::vector<std::string> replacements;
        auto override_it = options.replacements.find(entity.surface);
        if (override_it != options.replacements.end()) {
            replacements.push_back(override_it->second);
        } else {
            // same pattern class, drawn in seeded order; prefer values the
            // document does not already contain
            std::vector<std::size_t> pool;
            for (std::size_t r = 0; r < ranked.size(); ++r) {
                if (r == e) continue;
                if (ranked[r].mention.type != entity.type) continue;
                if (ranked[r].mention.signature() == entity.signature()) continue;
                pool.push_back(r);
            }
            fisher_yates_shuffle(pool, rng);
            for (std::size_t r : pool) {
                if (replacements.size() == 2) break;
                if (entity_present(ranked[r].mention, doc_bags[t])) continue;
                replacements.push_back(ranked[r].mention.surface);
            }
            for (std::size_t r : pool) {
                if (replacements.size() >= 1) break;
                replacements.push_back(ranked[r].mention.surface);
            }
        }
        if (replacements.empty()) {
            result.skipped.push_back("no replacement of class '" + entity.type + "' for '" +
                                     entity.surface + "'");
            continue;
        }

        for (const std::string& replacement : replacements) {
            std::string edited = splice(sample.document, matches, replacement);
            // a substitution is only meaningful if the old fact is gone
            if (entity_present(entity, TokenBag(edited, options.tokenizer))) {
                result.skipped.push_back("entity '" + entity.surface +
                                         "' still present after substitution in " + sample.id);
                continue;
            }
            InterventionCase c;
            c.case_id = next_case_id(sample.id);
            c.sample_id = sample.id;
            c.mode = InterventionMode::substitute;
            c.old_entity = entity.surface;
            c.new_entity = replacement;
            c.edited_document = std::move(edited);
            result.cases.push_back(std::move(c));
        }
    }
    return result;
}

InterventionOutcome classify_intervention(std::string_view generated,
                                          const std::optional<std::string>& old_entity,
                                          std::string_view new_entity,
                                          const StopwordSet& stopwords) {
    TokenBag bag(generated);
    auto content_of = [&stopwords](std::string_view surface) {
        std::vector<std::string> content;
        for (auto& tok : tokenize(surface).tokens) {
            if (!stopwords.contains(tok)) content.push_back(tok);
        }
        return content;
    };

    if (old_entity) {
        std::vector<std::string> old_tokens = content_of(*old_entity);
        if (bag.contains_all(old_tokens)) return InterventionOutcome::incorrect;
    }
    if (bag.contains_all(content_of(new_entity))) return InterventionOutcome::correct;
    return InterventionOutcome::skipped;
}

InterventionScore score_interventions(
    const std::vector<InterventionCase>& cases,
    const std::unordered_map<std::string, std::string>& generated_by_id,
    const StopwordSet& stopwords) {
    InterventionScore score;
    for (const InterventionCase& c : cases) {
        auto it = generated_by_id.find(c.case_id);
        if (it == generated_by_id.end()) it = generated_by_id.find(c.sample_id);
        if (it == generated_by_id.end()) {
            throw validation_error("no generated summary for case '" + c.case_id + "'");
        }
        switch (classify_intervention(it->second, c.old_entity, c.new_entity, stopwords)) {
            case InterventionOutcome::correct: ++score.correct; break;
            case InterventionOutcome::incorrect: ++score.incorrect; break;
            default: ++score.skipped; break;
        }
        ++score.total;
    }
    return score;
}

namespace {

using nlohmann::ordered_json;

double round4(double v) { return std::round(v * 10000.0) / 10000.0; }

std::string format4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

ordered_json bin_to_json(const BinReport& br, bool with_bounds) {
    ordered_json j;
    if (with_bounds) {
        j["lower"] = br.lower;
        if (br.upper) {
            j["upper"] = *br.upper;
        } else {
            j["upper"] = nullptr;
        }
    }
    j["count"] = br.count;
    j["entity_absent"] = br.entity_absent;
    auto put = [&j](const char* key, const std::optional<double>& v) {
        if (v) {
            j[key] = round4(*v);
        } else {
            j[key] = nullptr;
        }
    };
    put("r2", br.r2);
    put("e_rec", br.e_rec);
    put("e_prc", br.e_prc);
    put("e_rem", br.e_rem);
    return j;
}

BinReport bin_from_json(const ordered_json& j, bool with_bounds) {
    BinReport br;
    if (with_bounds) {
        br.lower = j.at("lower").get<double>();
        if (!j.at("upper").is_null()) br.upper = j.at("upper").get<double>();
    }
    br.count = j.at("count").get<std::size_t>();
    br.entity_absent = j.at("entity_absent").get<std::size_t>();
    auto get = [&j](const char* key) -> std::optional<double> {
        if (j.at(key).is_null()) return std::nullopt;
        return j.at(key).get<double>();
    };
    br.r2 = get("r2");
    br.e_rec = get("e_rec");
    br.e_prc = get("e_prc");
    br.e_rem = get("e_rem");
    return br;
}

std::string fingerprint_hex(std::uint64_t fp) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fp));
    return buf;
}

std::string render_csv(const EvaluationReport& report) {
    std::ostringstream out;
    out << "lower,upper,count,entity_absent,r2,e_rec,e_prc,e_rem\n";
    auto value = [](const std::optional<double>& v) { return v ? format4(*v) : std::string(); };
    for (const BinReport& br : report.bins) {
        out << format4(br.lower) << ',';
        if (br.upper) out << format4(*br.upper);
        out << ',' << br.count << ',' << br.entity_absent << ',' << value(br.r2) << ','
            << value(br.e_rec) << ',' << value(br.e_prc) << ',' << value(br.e_rem) << '\n';
    }
    out << "corpus,," << report.corpus.count << ',' << report.corpus.entity_absent << ','
        << value(report.corpus.r2) << ',' << value(report.corpus.e_rec) << ','
        << value(report.corpus.e_prc) << ',' << value(report.corpus.e_rem) << '\n';
    return out.str();
}

}  // namespace

std::string render_report(const EvaluationReport& report, ReportFormat format) {
    if (format == ReportFormat::csv) return render_csv(report);

    ordered_json j;
    j["schema_version"] = report.schema_version;
    j["config_fingerprint"] = fingerprint_hex(report.config_fingerprint);
    j["normalized"] = report.normalized;
    j["bins"] = ordered_json::array();
    for (const BinReport& br : report.bins) j["bins"].push_back(bin_to_json(br, true));
    j["corpus"] = bin_to_json(report.corpus, false);
    return j.dump(2) + "\n";
}

void export_report(const EvaluationReport& report, ReportFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write report file: " + path);
    out << render_report(report, format);
    if (!out) throw io_error("write failed: " + path);
}

EvaluationReport import_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open report file: " + path);
    ordered_json j = ordered_json::parse(in, nullptr, false);
    if (j.is_discarded()) throw parse_error("malformed report JSON: " + path);

    EvaluationReport report;
    report.schema_version = j.at("schema_version").get<int>();
    if (report.schema_version != 1) {
        throw validation_error("unsupported report schema version " +
                               std::to_string(report.schema_version));
    }
    report.config_fingerprint =
        std::stoull(j.at("config_fingerprint").get<std::string>(), nullptr, 16);
    report.normalized = j.at("normalized").get<bool>();
    for (const auto& bj : j.at("bins")) report.bins.push_back(bin_from_json(bj, true));
    report.corpus = bin_from_json(j.at("corpus"), false);
    return report;
}

}  // namespace lexdiv
