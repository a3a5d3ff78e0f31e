#include "lexdiv/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "lexdiv/error.hpp"
#include "lexdiv/unicode.hpp"
#include "nlohmann/json.hpp"

namespace lexdiv {

using namespace uni;

std::string to_string(Split split) {
    switch (split) {
        case Split::train: return "train";
        case Split::validation: return "validation";
        case Split::test: return "test";
    }
    return "train";
}

Split split_from_string(std::string_view name) {
    if (name == "train") return Split::train;
    if (name == "validation") return Split::validation;
    if (name == "test") return Split::test;
    throw argument_error("unknown split '" + std::string(name) +
                         "' (expected train|validation|test)");
}

const Sample* Dataset::find(std::string_view id) const {
    for (const auto& s : samples) {
        if (s.id == id) return &s;
    }
    return nullptr;
}

std::uint64_t TokenizerConfig::fingerprint() const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 0x100000001B3ULL;
    };
    mix(1);  // tokenizer rule revision
    mix(case_fold ? 1 : 0);
    return h;
}

std::string fold_case(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        char32_t cp = decode_utf8(text, pos);
        encode_utf8(fold_codepoint(cp), out);
    }
    return out;
}

TokenSeq tokenize(std::string_view text, const TokenizerConfig& config) {
    TokenSeq seq;
    std::string current;
    std::size_t tok_start = 0;
    bool prev_was_letter = false;
    bool has_apostrophe = false;

    auto flush = [&](std::size_t end_pos) {
        if (!current.empty()) {
            seq.tokens.push_back(std::move(current));
            seq.spans.push_back({tok_start, end_pos - tok_start});
            current.clear();
        }
        prev_was_letter = false;
        has_apostrophe = false;
    };

    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t cp_start = pos;
        char32_t cp = decode_utf8(text, pos);
        if (is_word_char(cp)) {
            if (current.empty()) tok_start = cp_start;
            encode_utf8(config.case_fold ? fold_codepoint(cp) : cp, current);
            prev_was_letter = is_letter_char(cp);
            continue;
        }
        if (cp == U'\'' && !current.empty() && prev_was_letter && !has_apostrophe) {
            std::size_t peek = pos;
            if (peek < text.size() && is_letter_char(decode_utf8(text, peek))) {
                current.push_back('\'');
                has_apostrophe = true;
                prev_was_letter = false;
                continue;
            }
        }
        flush(cp_start);
    }
    flush(text.size());
    return seq;
}

namespace {

const char* const kDefaultAbbreviations[] = {
    "Mr", "Mrs", "Ms", "Dr", "Prof", "Rev", "Gen", "Sen",  "Rep", "Hon",
    "St", "Jr",  "Sr", "Co", "Inc",  "Ltd", "Corp", "Fig", "Eq",  "vs",
    "etc", "approx", "U.S", "U.K", "U.N", "E.U", "a.m", "p.m", "i.e", "e.g"};

}  // namespace

SentenceSplitter::SentenceSplitter() {
    for (const char* a : kDefaultAbbreviations) abbreviations_.push_back(fold_case(a));
}

SentenceSplitter::SentenceSplitter(std::vector<std::string> abbreviations) {
    for (auto& a : abbreviations) abbreviations_.push_back(fold_case(a));
}

SentenceSplitter SentenceSplitter::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open abbreviation file: " + path);
    std::vector<std::string> abbrevs;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && is_ws(line.back())) line.pop_back();
        if (!line.empty()) abbrevs.push_back(line);
    }
    return SentenceSplitter(std::move(abbrevs));
}

bool SentenceSplitter::is_abbreviation(std::string_view word) const {
    std::string folded = fold_case(word);
    return std::find(abbreviations_.begin(), abbreviations_.end(), folded) !=
           abbreviations_.end();
}

std::vector<std::pair<std::size_t, std::size_t>> SentenceSplitter::segment(
    std::string_view text) const {
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    std::size_t start = 0;
    while (start < text.size() && is_ws(text[start])) ++start;
    if (start == text.size()) return ranges;

    std::size_t i = start;
    while (i < text.size()) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') {
            ++i;
            continue;
        }
        std::size_t after = i + 1;
        if (after >= text.size() || !is_ws(text[after])) {
            ++i;
            continue;
        }
        std::size_t next = after;
        while (next < text.size() && is_ws(text[next])) ++next;
        if (next == text.size()) break;  // trailing whitespace only
        std::size_t probe = next;
        char32_t cp = decode_utf8(text, probe);
        if (!is_upper(cp) && !is_ascii_digit(cp)) {
            ++i;
            continue;
        }
        if (c == '.') {
            // word immediately before the period, dotted prefixes included
            std::size_t w = i;
            while (w > 0) {
                char pc = text[w - 1];
                if ((pc >= 'a' && pc <= 'z') || (pc >= 'A' && pc <= 'Z') || pc == '.') {
                    --w;
                } else {
                    break;
                }
            }
            std::string_view word = text.substr(w, i - w);
            while (!word.empty() && word.front() == '.') word.remove_prefix(1);
            if (!word.empty() && is_abbreviation(word)) {
                ++i;
                continue;
            }
        }
        ranges.emplace_back(start, i + 1);
        start = next;
        i = next;
    }
    std::size_t end = text.size();
    while (end > start && is_ws(text[end - 1])) --end;
    if (end > start) ranges.emplace_back(start, end);
    return ranges;
}

std::vector<std::string> SentenceSplitter::split(std::string_view text) const {
    std::vector<std::string> out;
    for (auto [s, e] : segment(text)) out.emplace_back(text.substr(s, e - s));
    return out;
}

std::vector<std::size_t> SentenceSplitter::sentence_starts(std::string_view text) const {
    std::vector<std::size_t> out;
    for (auto [s, e] : segment(text)) out.push_back(s);
    return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
    static const SentenceSplitter splitter;
    return splitter.split(text);
}

namespace {

using nlohmann::json;

Sample parse_record(const json& obj, std::size_t line_no, const LoadOptions& options,
                    const std::string& origin) {
    auto where = [&] { return origin + ":" + std::to_string(line_no); };
    if (!obj.is_object()) throw parse_error(where() + ": line is not a JSON object");

    Sample sample;
    for (const char* field : {"id", "document", "summary"}) {
        auto it = obj.find(field);
        if (it == obj.end()) {
            if (options.lenient && std::string_view(field) == "summary") continue;
            throw validation_error(where() + ": missing field " + field);
        }
        if (!it->is_string()) {
            throw validation_error(where() + ": field " + field + " must be a string");
        }
    }
    sample.id = obj.at("id").get<std::string>();
    sample.document = obj.at("document").get<std::string>();
    if (obj.contains("summary")) sample.summary = obj.at("summary").get<std::string>();

    if (sample.id.empty()) throw validation_error(where() + ": empty id");
    if (sample.summary.empty()) {
        if (!options.lenient) {
            throw validation_error(where() + ": empty summary (use lenient mode to keep it)");
        }
        sample.empty_summary_flagged = true;
    }

    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const std::string& key = it.key();
        if (key == "id" || key == "document" || key == "summary") continue;
        sample.meta[key] = it->is_string() ? it->get<std::string>() : it->dump();
    }
    return sample;
}

}  // namespace

Dataset load_jsonl_text(std::string_view text, Split split, const LoadOptions& options,
                        const std::string& origin) {
    Dataset ds;
    ds.name = origin;
    ds.split = split;

    std::unordered_map<std::string, std::size_t> seen;  // id -> first line

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        if (line.empty() && pos > text.size()) break;  // trailing newline
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded()) {
            throw parse_error(origin + ":" + std::to_string(line_no) + ": malformed JSON line");
        }
        Sample sample = parse_record(obj, line_no, options, origin);
        auto [it, inserted] = seen.emplace(sample.id, line_no);
        if (!inserted) {
            throw validation_error(origin + ":" + std::to_string(line_no) + ": duplicate id '" +
                                   sample.id + "' (first seen at line " +
                                   std::to_string(it->second) + ")");
        }
        ds.samples.push_back(std::move(sample));
    }
    return ds;
}

Dataset load_jsonl(const std::string& path, Split split, const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open corpus file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_jsonl_text(buf.str(), split, options, path);
}

}  // namespace lexdiv
