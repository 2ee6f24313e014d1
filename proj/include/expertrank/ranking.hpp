#pragma once

#include <string>
#include <vector>

#include "expertrank/extractor.hpp"
#include "expertrank/matrices.hpp"

namespace expertrank {

struct RankedEntry {
    std::string label;
    double score = 0.0;
};

struct RankedList {
    std::vector<RankedEntry> entries;  // descending score, ties by ascending label
    bool fallback_used = false;        // no exact topic match; lemma-overlap scoring used
    bool no_match = false;             // nothing matched even under fallback
};

// Expert finding: normalize the query through the same tokenize/lemmatize path
// as extraction, look up the exact topic key, and rank experts by that column.
// Without an exact match (and unless exact_only), every topic sharing at least
// one lemma with the query contributes, and experts are scored by the mean of
// those columns. Zero scores are dropped. An empty normalized query is a data
// error; a query matching nothing is a regular no-match result.
RankedList find_experts(const std::string& query, const WeightMatrix& retopm,
                        const std::vector<std::string>& experts,
                        const std::vector<std::string>& topic_vocab,
                        const ExtractionConfig& config, int top_k, bool exact_only = false);

// Expert profiling: the expert's strongest topics, by row value.
RankedList profile_expert(const std::string& expert, const WeightMatrix& retopm,
                          const std::vector<std::string>& experts,
                          const std::vector<std::string>& topic_vocab, int top_k);

// Query -> lemma list (tokenize, stopword-filter, lemmatize; no chunking).
std::vector<std::string> normalize_query(const std::string& query,
                                         const ExtractionConfig& config);

} // namespace expertrank
