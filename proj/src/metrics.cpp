#include "lexdiv/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lexdiv/error.hpp"
#include "lexdiv/unicode.hpp"
#include "nlohmann/json.hpp"

namespace lexdiv {

namespace detail {
const std::vector<std::string>& builtin_stopword_list();
}

namespace {

constexpr char kSep = '\x1f';

std::vector<std::string> maybe_stem(const std::vector<std::string>& tokens, bool stemming) {
    if (!stemming) return tokens;
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(s_stem(t));
    return out;
}

std::unordered_map<std::string, std::uint32_t> ngram_counts(const std::vector<std::string>& tokens,
                                                            int n) {
    std::unordered_map<std::string, std::uint32_t> counts;
    if (tokens.size() < static_cast<std::size_t>(n)) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key;
        for (int j = 0; j < n; ++j) {
            if (j) key.push_back(kSep);
            key += tokens[i + j];
        }
        ++counts[key];
    }
    return counts;
}

}  // namespace

std::string s_stem(std::string_view word) {
    auto ends_with = [&word](std::string_view suffix) {
        return word.size() >= suffix.size() &&
               word.substr(word.size() - suffix.size()) == suffix;
    };
    std::string out(word);
    if (word.size() > 3 && ends_with("ies") && !ends_with("eies") && !ends_with("aies")) {
        out.replace(out.size() - 3, 3, "y");
    } else if (word.size() > 3 && ends_with("es") && !ends_with("aes") && !ends_with("ees") &&
               !ends_with("oes")) {
        out.pop_back();
    } else if (word.size() > 2 && ends_with("s") && !ends_with("us") && !ends_with("ss")) {
        out.pop_back();
    }
    return out;
}

RougeScore rouge_n(const TokenSeq& candidate, const TokenSeq& reference, int n,
                   const RougeOptions& options) {
    if (n < 1) throw argument_error("ROUGE order must be >= 1");
    RougeScore score;
    score.n = n;

    auto cand_tokens = maybe_stem(candidate.tokens, options.stemming);
    auto ref_tokens = maybe_stem(reference.tokens, options.stemming);
    auto cand_counts = ngram_counts(cand_tokens, n);
    auto ref_counts = ngram_counts(ref_tokens, n);

    std::uint64_t cand_total = 0;
    for (const auto& [k, c] : cand_counts) cand_total += c;
    std::uint64_t ref_total = 0;
    for (const auto& [k, c] : ref_counts) ref_total += c;

    std::uint64_t match = 0;
    for (const auto& [key, c] : cand_counts) {
        auto it = ref_counts.find(key);
        if (it != ref_counts.end()) match += std::min(c, it->second);
    }

    if (cand_total > 0) score.precision = static_cast<double>(match) / cand_total;
    if (ref_total > 0) score.recall = static_cast<double>(match) / ref_total;
    if (score.precision + score.recall > 0) {
        score.f1 = 2.0 * score.precision * score.recall / (score.precision + score.recall);
    }
    return score;
}

RougeScore rouge_n(std::string_view candidate, std::string_view reference, int n,
                   const RougeOptions& options) {
    return rouge_n(tokenize(candidate), tokenize(reference), n, options);
}

StopwordSet::StopwordSet(std::vector<std::string> words) {
    for (auto& w : words) words_.insert(fold_case(w));
}

const StopwordSet& StopwordSet::builtin() {
    static const StopwordSet set(detail::builtin_stopword_list());
    return set;
}

StopwordSet StopwordSet::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open stopword file: " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && uni::is_ws(line.back())) line.pop_back();
        if (!line.empty()) words.push_back(line);
    }
    return StopwordSet(std::move(words));
}

bool StopwordSet::contains(std::string_view folded_word) const {
    return words_.count(std::string(folded_word)) > 0;
}

std::string EntityMention::signature() const {
    std::string sig;
    for (const auto& t : content_tokens) {
        if (!sig.empty()) sig.push_back(kSep);
        sig += t;
    }
    return sig;
}

namespace {

bool token_has_digit(const std::string& token) {
    return std::any_of(token.begin(), token.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
}

bool is_year_token(const std::string& token) {
    if (token.size() != 4) return false;
    for (char c : token) {
        if (c < '0' || c > '9') return false;
    }
    return token[0] == '1' || token[0] == '2';
}

// Mention from a token run [first, last]; empty content (all stop words)
// yields std::nullopt.
std::optional<EntityMention> make_mention(std::string_view text, const TokenSeq& folded,
                                          std::size_t first, std::size_t last,
                                          const StopwordSet& stopwords, std::string type) {
    EntityMention m;
    std::size_t begin = folded.spans[first].offset;
    std::size_t end = folded.spans[last].offset + folded.spans[last].length;
    m.surface = std::string(text.substr(begin, end - begin));
    for (std::size_t i = first; i <= last; ++i) {
        if (!stopwords.contains(folded.tokens[i])) m.content_tokens.push_back(folded.tokens[i]);
    }
    if (m.content_tokens.empty()) return std::nullopt;
    if (type == "numeric" && m.content_tokens.size() == 1 && is_year_token(m.content_tokens[0])) {
        type = "year";
    }
    m.type = std::move(type);
    return m;
}

}  // namespace

HeuristicExtractor::HeuristicExtractor(const StopwordSet* stopwords)
    : stopwords_(stopwords ? stopwords : &StopwordSet::builtin()) {}

std::vector<EntityMention> HeuristicExtractor::extract(std::string_view text,
                                                       std::string_view /*sample_id*/,
                                                       std::string_view /*field*/) const {
    TokenSeq toks = tokenize(text);  // folded tokens, original spans
    const std::size_t n = toks.size();
    if (n == 0) return {};

    // sentence-initial token indices
    std::vector<bool> sentence_initial(n, false);
    {
        std::vector<std::size_t> starts = splitter_.sentence_starts(text);
        std::size_t t = 0;
        for (std::size_t s : starts) {
            while (t < n && toks.spans[t].offset < s) ++t;
            if (t < n) sentence_initial[t] = true;
        }
    }

    std::vector<bool> capitalized(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t pos = toks.spans[i].offset;
        capitalized[i] = uni::is_upper(uni::decode_utf8(text, pos));
    }

    // words seen capitalized somewhere other than a sentence start
    std::unordered_set<std::string> recurs_capitalized;
    for (std::size_t i = 0; i < n; ++i) {
        if (capitalized[i] && !sentence_initial[i]) recurs_capitalized.insert(toks.tokens[i]);
    }

    auto whitespace_gap = [&](std::size_t prev, std::size_t next) {
        std::size_t from = toks.spans[prev].offset + toks.spans[prev].length;
        std::size_t to = toks.spans[next].offset;
        for (std::size_t p = from; p < to; ++p) {
            if (!uni::is_ws(text[p])) return false;
        }
        return true;
    };
    auto numeric_gap = [&](std::size_t prev, std::size_t next) {
        std::size_t from = toks.spans[prev].offset + toks.spans[prev].length;
        std::size_t to = toks.spans[next].offset;
        if (whitespace_gap(prev, next)) return true;
        if (to - from == 1) {
            char c = text[from];
            return c == '-' || c == '/' || c == '.' || c == ':' || c == ',';
        }
        return false;
    };

    std::vector<EntityMention> mentions;
    std::unordered_set<std::string> seen;
    auto emit = [&](std::optional<EntityMention> m) {
        if (!m) return;
        if (seen.insert(m->signature()).second) mentions.push_back(std::move(*m));
    };

    // capitalized runs
    std::size_t i = 0;
    while (i < n) {
        if (!capitalized[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && capitalized[j + 1] && whitespace_gap(j, j + 1)) ++j;
        bool lone_sentence_opener =
            (j == i) && sentence_initial[i] && !recurs_capitalized.count(toks.tokens[i]);
        if (!lone_sentence_opener) {
            emit(make_mention(text, toks, i, j, *stopwords_, "name"));
        }
        i = j + 1;
    }

    // numeric expression runs
    i = 0;
    while (i < n) {
        if (!token_has_digit(toks.tokens[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && token_has_digit(toks.tokens[j + 1]) && numeric_gap(j, j + 1)) ++j;
        emit(make_mention(text, toks, i, j, *stopwords_, "numeric"));
        i = j + 1;
    }

    return mentions;
}

PrecomputedExtractor PrecomputedExtractor::from_file(const std::string& path,
                                                     const StopwordSet* stopwords) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open entity sidecar file: " + path);
    const StopwordSet& stops = stopwords ? *stopwords : StopwordSet::builtin();

    PrecomputedExtractor extractor;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            throw parse_error(path + ":" + std::to_string(line_no) + ": malformed JSON line");
        }
        if (!obj.contains("id") || !obj.contains("field") || !obj.contains("mentions")) {
            throw validation_error(path + ":" + std::to_string(line_no) +
                                   ": expected fields id, field, mentions");
        }
        std::vector<std::string> mentions;
        for (const auto& m : obj.at("mentions")) mentions.push_back(m.get<std::string>());
        extractor.add(obj.at("id").get<std::string>(), obj.at("field").get<std::string>(),
                      mentions, stops);
    }
    return extractor;
}

void PrecomputedExtractor::add(const std::string& sample_id, const std::string& field,
                               const std::vector<std::string>& mentions,
                               const StopwordSet& stopwords) {
    std::vector<EntityMention>& list = mentions_[sample_id + kSep + field];
    std::unordered_set<std::string> seen;
    for (const auto& m : list) seen.insert(m.signature());
    for (const std::string& surface : mentions) {
        EntityMention mention;
        mention.surface = surface;
        for (const auto& tok : tokenize(surface).tokens) {
            if (!stopwords.contains(tok)) mention.content_tokens.push_back(tok);
        }
        if (mention.content_tokens.empty()) continue;
        if (seen.insert(mention.signature()).second) list.push_back(std::move(mention));
    }
}

std::vector<EntityMention> PrecomputedExtractor::extract(std::string_view /*text*/,
                                                         std::string_view sample_id,
                                                         std::string_view field) const {
    std::string key = std::string(sample_id) + kSep + std::string(field);
    auto it = mentions_.find(key);
    if (it == mentions_.end()) {
        throw lookup_error("no precomputed entities for id '" + std::string(sample_id) +
                           "' field '" + std::string(field) + "'");
    }
    return it->second;
}

TokenBag::TokenBag(std::string_view text, const TokenizerConfig& config) {
    for (auto& t : tokenize(text, config).tokens) tokens_.insert(std::move(t));
}

bool TokenBag::contains(std::string_view folded_token) const {
    return tokens_.count(std::string(folded_token)) > 0;
}

bool TokenBag::contains_all(const std::vector<std::string>& content_tokens) const {
    for (const auto& t : content_tokens) {
        if (!contains(t)) return false;
    }
    return !content_tokens.empty();
}

bool entity_present(const EntityMention& mention, const TokenBag& bag) {
    return bag.contains_all(mention.content_tokens);
}

EntityMetricRecord entity_metrics(std::string_view generated, std::string_view reference,
                                  std::string_view source, const EntityExtractor& extractor,
                                  std::string_view sample_id,
                                  const EntityMetricOptions& options) {
    EntityMetricRecord rec;
    rec.sample_id = std::string(sample_id);

    const bool from_generated = options.denominator == EntityDenominator::generated;
    std::string_view counted_text = from_generated ? generated : reference;
    std::string_view counted_field = from_generated ? "generated" : "summary";
    std::string_view other_text = from_generated ? reference : generated;

    std::vector<EntityMention> counted =
        extractor.extract(counted_text, sample_id, counted_field);
    rec.ref_entities = extractor.extract(reference, sample_id, "summary");
    rec.src_entities = extractor.extract(source, sample_id, "document");

    TokenBag other_bag(other_text, options.tokenizer);
    TokenBag source_bag(source, options.tokenizer);

    std::size_t in_both = 0, in_source = 0, in_other_not_source = 0;
    for (const EntityMention& m : counted) {
        JudgedEntity judged;
        judged.mention = m;
        judged.in_reference = entity_present(m, other_bag);
        judged.in_source = entity_present(m, source_bag);
        if (judged.in_reference && judged.in_source) ++in_both;
        if (judged.in_source) ++in_source;
        if (judged.in_reference && !judged.in_source) ++in_other_not_source;
        rec.gen_entities.push_back(std::move(judged));
    }
    rec.n_gen = counted.size();
    if (rec.n_gen > 0) {
        double denom = static_cast<double>(rec.n_gen);
        rec.e_rec = 100.0 * in_both / denom;
        rec.e_prc = 100.0 * in_source / denom;
        rec.e_rem = 100.0 * in_other_not_source / denom;
    }
    return rec;
}

}  // namespace lexdiv
