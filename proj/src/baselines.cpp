#include "lexdiv/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lexdiv/error.hpp"

namespace lexdiv {

TfIdfIndex::TfIdfIndex(const Dataset& train, const TokenizerConfig& config) : config_(config) {
    if (train.samples.empty()) throw validation_error("empty training corpus");
    num_docs_ = train.samples.size();

    // term -> raw count per document; ordered map fixes accumulation order
    std::vector<std::map<std::string, std::uint32_t>> doc_terms(num_docs_);
    std::map<std::string, std::uint32_t> df;
    for (std::size_t d = 0; d < num_docs_; ++d) {
        for (auto& tok : tokenize(train.samples[d].document, config_).tokens) {
            if (doc_terms[d][tok]++ == 0) ++df[tok];
        }
    }
    for (const auto& [term, count] : df) {
        idf_[term] = std::log((1.0 + num_docs_) / (1.0 + count)) + 1.0;
    }
    for (std::size_t d = 0; d < num_docs_; ++d) {
        double norm_sq = 0.0;
        for (const auto& [term, tf] : doc_terms[d]) {
            double w = (1.0 + std::log(static_cast<double>(tf))) * idf_.at(term);
            norm_sq += w * w;
        }
        double norm = norm_sq > 0 ? std::sqrt(norm_sq) : 1.0;
        for (const auto& [term, tf] : doc_terms[d]) {
            double w = (1.0 + std::log(static_cast<double>(tf))) * idf_.at(term);
            postings_[term].push_back({static_cast<std::uint32_t>(d), w / norm});
        }
    }
}

std::pair<std::size_t, double> TfIdfIndex::best_match(std::string_view document) const {
    std::map<std::string, std::uint32_t> query_tf;
    for (auto& tok : tokenize(document, config_).tokens) ++query_tf[tok];

    double query_norm_sq = 0.0;
    std::vector<double> scores(num_docs_, 0.0);
    for (const auto& [term, tf] : query_tf) {
        auto idf_it = idf_.find(term);
        if (idf_it == idf_.end()) continue;  // outside the training vocabulary
        double qw = (1.0 + std::log(static_cast<double>(tf))) * idf_it->second;
        query_norm_sq += qw * qw;
        for (const Posting& p : postings_.at(term)) scores[p.doc] += qw * p.weight;
    }

    if (query_norm_sq <= 0.0) return {0, 0.0};
    double query_norm = std::sqrt(query_norm_sq);

    std::size_t best = 0;
    double best_score = scores[0] / query_norm;
    for (std::size_t d = 1; d < num_docs_; ++d) {
        double s = scores[d] / query_norm;
        if (s > best_score) {
            best_score = s;
            best = d;
        }
    }
    return {best, best_score};
}

SummarizerOutput retrieval_summarize(const Sample& test_sample, const Dataset& train,
                                     const TfIdfIndex& index) {
    if (train.samples.empty()) throw validation_error("empty training corpus");
    auto [best, similarity] = index.best_match(test_sample.document);

    SummarizerOutput out;
    out.sample_id = test_sample.id;
    out.policy = "retrieval";
    out.summary = train.samples[best].summary;
    out.retrieved_id = train.samples[best].id;
    out.similarity = similarity;
    out.zero_similarity = similarity <= 0.0;
    return out;
}

namespace {

std::string join_sentences(const std::vector<std::string>& sentences,
                           const std::vector<std::size_t>& indices) {
    std::string out;
    for (std::size_t idx : indices) {
        if (!out.empty()) out.push_back(' ');
        out += sentences[idx];
    }
    return out;
}

}  // namespace

SummarizerOutput lead_k(const Sample& sample, int k) {
    if (k < 1) throw argument_error("lead k must be >= 1");
    std::vector<std::string> sentences = split_sentences(sample.document);

    SummarizerOutput out;
    out.sample_id = sample.id;
    out.policy = "lead";
    std::size_t take = std::min<std::size_t>(k, sentences.size());
    for (std::size_t i = 0; i < take; ++i) out.sentence_indices.push_back(i);
    out.summary = join_sentences(sentences, out.sentence_indices);
    return out;
}

SummarizerOutput extractive_oracle(const Sample& sample, int max_sentences) {
    if (max_sentences < 1) throw argument_error("max_sentences must be >= 1");
    std::vector<std::string> sentences = split_sentences(sample.document);
    TokenSeq reference = tokenize(sample.summary);

    SummarizerOutput out;
    out.sample_id = sample.id;
    out.policy = "oracle";

    std::vector<std::size_t> selected;
    double best_f1 = 0.0;
    while (selected.size() < static_cast<std::size_t>(max_sentences)) {
        std::size_t pick = sentences.size();
        double pick_f1 = best_f1;
        for (std::size_t i = 0; i < sentences.size(); ++i) {
            if (std::find(selected.begin(), selected.end(), i) != selected.end()) continue;
            std::vector<std::size_t> trial(selected);
            trial.push_back(i);
            std::sort(trial.begin(), trial.end());
            double f1 = rouge_n(tokenize(join_sentences(sentences, trial)), reference, 2).f1;
            if (f1 > pick_f1) {
                pick_f1 = f1;
                pick = i;
            }
        }
        if (pick == sentences.size()) break;  // nothing improves
        selected.push_back(pick);
        best_f1 = pick_f1;
    }
    std::sort(selected.begin(), selected.end());
    out.sentence_indices = selected;
    out.summary = join_sentences(sentences, selected);
    out.empty_selection = selected.empty();
    return out;
}

PseudoSummary pseudo_summary(std::string_view document, R1Component component) {
    std::vector<std::string> sentences = split_sentences(document);
    if (sentences.size() < 2) {
        throw argument_error("document too short for pseudo-summarization (need >= 2 sentences)");
    }

    auto score_of = [component](const RougeScore& s) {
        switch (component) {
            case R1Component::recall: return s.recall;
            case R1Component::precision: return s.precision;
            case R1Component::f1: return s.f1;
        }
        return s.f1;
    };

    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        std::vector<std::size_t> rest;
        for (std::size_t j = 0; j < sentences.size(); ++j) {
            if (j != i) rest.push_back(j);
        }
        RougeScore r1 = rouge_n(sentences[i], join_sentences(sentences, rest), 1);
        double score = score_of(r1);
        if (score > best_score) {
            best_score = score;
            best = i;
        }
    }

    PseudoSummary out;
    out.sentence_index = best;
    out.summary = sentences[best];
    std::vector<std::size_t> rest;
    for (std::size_t j = 0; j < sentences.size(); ++j) {
        if (j != best) rest.push_back(j);
    }
    out.remainder = join_sentences(sentences, rest);
    return out;
}

}  // namespace lexdiv
