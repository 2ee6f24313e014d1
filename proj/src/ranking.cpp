#include "expertrank/ranking.hpp"

#include <algorithm>
#include <set>

#include "expertrank/errors.hpp"

namespace expertrank {

namespace {

void sort_and_trim(RankedList& list, int top_k) {
    std::sort(list.entries.begin(), list.entries.end(),
              [](const RankedEntry& a, const RankedEntry& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.label < b.label;
              });
    if (top_k >= 0 && static_cast<int>(list.entries.size()) > top_k)
        list.entries.resize(top_k);
}

} // namespace

std::vector<std::string> normalize_query(const std::string& query,
                                         const ExtractionConfig& config) {
    std::vector<std::string> lemmas;
    for (const std::string& sentence : split_sentences(query))
        for (const TaggedToken& token : tag(sentence, config))
            lemmas.push_back(token.lemma);
    if (lemmas.empty()) {
        // A query with no sentence terminator still tokenizes: treat the whole
        // string as one sentence.
        for (const TaggedToken& token : tag(query, config)) lemmas.push_back(token.lemma);
    }
    return lemmas;
}

RankedList find_experts(const std::string& query, const WeightMatrix& retopm,
                        const std::vector<std::string>& experts,
                        const std::vector<std::string>& topic_vocab,
                        const ExtractionConfig& config, int top_k, bool exact_only) {
    if (retopm.rows() != static_cast<int>(experts.size()) ||
        retopm.cols() != static_cast<int>(topic_vocab.size()))
        fail("E_DIM", "score matrix does not match expert/topic vocabularies");

    std::vector<std::string> lemmas = normalize_query(query, config);
    if (lemmas.empty()) fail("E_QUERY", "query is empty after normalization");

    std::string key;
    for (std::size_t i = 0; i < lemmas.size(); ++i) {
        if (i) key += ' ';
        key += lemmas[i];
    }

    RankedList list;
    std::vector<double> scores(experts.size(), 0.0);

    auto exact = std::lower_bound(topic_vocab.begin(), topic_vocab.end(), key);
    if (exact != topic_vocab.end() && *exact == key) {
        int t = static_cast<int>(exact - topic_vocab.begin());
        scores = retopm.column(t);
    } else if (exact_only) {
        list.no_match = true;
        return list;
    } else {
        // Fallback: average the columns of every topic sharing at least one
        // lemma with the query.
        list.fallback_used = true;
        std::set<std::string> query_lemmas(lemmas.begin(), lemmas.end());
        int matched = 0;
        for (std::size_t t = 0; t < topic_vocab.size(); ++t) {
            bool shares = false;
            for (const auto& lemma : split_topic_key(topic_vocab[t]))
                if (query_lemmas.count(lemma)) {
                    shares = true;
                    break;
                }
            if (!shares) continue;
            ++matched;
            std::vector<double> column = retopm.column(static_cast<int>(t));
            for (std::size_t x = 0; x < scores.size(); ++x) scores[x] += column[x];
        }
        if (matched == 0) {
            list.fallback_used = false;
            list.no_match = true;
            return list;
        }
        for (double& s : scores) s /= matched;
    }

    for (std::size_t x = 0; x < experts.size(); ++x)
        if (scores[x] != 0.0) list.entries.push_back({experts[x], scores[x]});
    sort_and_trim(list, top_k);
    return list;
}

RankedList profile_expert(const std::string& expert, const WeightMatrix& retopm,
                          const std::vector<std::string>& experts,
                          const std::vector<std::string>& topic_vocab, int top_k) {
    if (retopm.rows() != static_cast<int>(experts.size()) ||
        retopm.cols() != static_cast<int>(topic_vocab.size()))
        fail("E_DIM", "score matrix does not match expert/topic vocabularies");

    auto it = std::find(experts.begin(), experts.end(), expert);
    if (it == experts.end()) fail("E_REF", "unknown expert: " + expert);
    int x = static_cast<int>(it - experts.begin());

    RankedList list;
    retopm.for_each_in_row(x, [&](int t, double value) {
        if (value != 0.0) list.entries.push_back({topic_vocab[t], value});
    });
    sort_and_trim(list, top_k);
    return list;
}

} // namespace expertrank
