#include "expertrank/matrices.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <unordered_set>

#include "expertrank/errors.hpp"

namespace expertrank {

const char* role_name(MatrixRole role) {
    switch (role) {
        case MatrixRole::DTM: return "DTM";
        case MatrixRole::DPM: return "DPM";
        case MatrixRole::EDM: return "EDM";
        case MatrixRole::ETopM: return "ETopM";
        case MatrixRole::DTopM: return "DTopM";
        case MatrixRole::RETopM: return "RETopM";
        case MatrixRole::Adjacency: return "M";
    }
    return "?";
}

MatrixRole role_from_name(const std::string& name) {
    std::string lower;
    for (unsigned char c : name) lower += static_cast<char>(std::tolower(c));
    if (lower == "dtm") return MatrixRole::DTM;
    if (lower == "dpm") return MatrixRole::DPM;
    if (lower == "edm") return MatrixRole::EDM;
    if (lower == "etopm") return MatrixRole::ETopM;
    if (lower == "dtopm") return MatrixRole::DTopM;
    if (lower == "retopm") return MatrixRole::RETopM;
    if (lower == "m") return MatrixRole::Adjacency;
    fail("E_FORMAT", "unknown matrix role: " + name);
}

double canonical_value(double value) {
    if (!std::isfinite(value)) fail("E_NUMERIC", "non-finite matrix value");
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value,
                                   std::chars_format::general, 9);
    if (ec != std::errc{}) fail("E_NUMERIC", "cannot format matrix value");
    double round_tripped = 0.0;
    auto [ptr, ec2] = std::from_chars(buffer, end, round_tripped);
    if (ec2 != std::errc{} || ptr != end) fail("E_NUMERIC", "cannot parse matrix value");
    return round_tripped;
}

WeightMatrix::WeightMatrix(MatrixRole role, int rows, int cols)
    : role_(role), rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) fail("E_DIM", "negative matrix dimension");
}

void WeightMatrix::check_bounds(int row, int col) const {
    if (row < 0 || row >= rows_ || col < 0 || col >= cols_)
        fail("E_DIM", std::string(role_name(role_)) + ": entry (" + std::to_string(row) +
                          ", " + std::to_string(col) + ") outside " + std::to_string(rows_) +
                          "x" + std::to_string(cols_));
}

void WeightMatrix::set(int row, int col, double value) {
    check_bounds(row, col);
    if (!std::isfinite(value))
        fail("E_NUMERIC", std::string(role_name(role_)) + ": non-finite value at (" +
                              std::to_string(row) + ", " + std::to_string(col) + ")");
    if (value == 0.0) {
        entries_.erase({row, col});
        return;
    }
    entries_[{row, col}] = canonical_value(value);
}

void WeightMatrix::add(int row, int col, double value) {
    set(row, col, at(row, col) + value);
}

double WeightMatrix::at(int row, int col) const {
    check_bounds(row, col);
    auto it = entries_.find({row, col});
    return it == entries_.end() ? 0.0 : it->second;
}

std::vector<double> WeightMatrix::column(int col) const {
    check_bounds(0, col);
    std::vector<double> out(rows_, 0.0);
    for (const auto& [key, value] : entries_)
        if (key.second == col) out[key.first] = value;
    return out;
}

std::vector<double> WeightMatrix::row(int r) const {
    check_bounds(r, 0);
    std::vector<double> out(cols_, 0.0);
    auto it = entries_.lower_bound({r, 0});
    for (; it != entries_.end() && it->first.first == r; ++it)
        out[it->first.second] = it->second;
    return out;
}

bool WeightMatrix::equal(const WeightMatrix& other, double tolerance) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() || b != other.entries_.end()) {
        if (a != entries_.end() && (b == other.entries_.end() || a->first < b->first)) {
            if (std::abs(a->second) > tolerance) return false;
            ++a;
        } else if (b != other.entries_.end() &&
                   (a == entries_.end() || b->first < a->first)) {
            if (std::abs(b->second) > tolerance) return false;
            ++b;
        } else {
            if (std::abs(a->second - b->second) > tolerance) return false;
            ++a;
            ++b;
        }
    }
    return true;
}

DfIndex build_df_index(const ExtractionResult& extraction) {
    DfIndex index;
    const std::size_t n_docs = extraction.doc_tokens.size();
    std::vector<std::unordered_set<std::string>> token_sets(n_docs);
    for (std::size_t d = 0; d < n_docs; ++d) {
        token_sets[d].insert(extraction.doc_tokens[d].begin(), extraction.doc_tokens[d].end());
        for (const auto& lemma : token_sets[d]) ++index.token_df[lemma];
        std::unordered_set<std::string> topics(extraction.doc_topics[d].begin(),
                                               extraction.doc_topics[d].end());
        for (const auto& key : topics) ++index.topic_df[key];
    }
    for (const auto& key : extraction.topic_vocab) {
        int count = 0;
        auto lemmas = split_topic_key(key);
        for (std::size_t d = 0; d < n_docs; ++d) {
            bool all = true;
            for (const auto& lemma : lemmas)
                if (!token_sets[d].count(lemma)) {
                    all = false;
                    break;
                }
            if (all) ++count;
        }
        index.topic_conj_df[key] = count;
    }
    return index;
}

WeightMatrix build_dtm(const ExtractionResult& extraction) {
    WeightMatrix dtm(MatrixRole::DTM, static_cast<int>(extraction.doc_tokens.size()),
                     static_cast<int>(extraction.token_vocab.size()));
    for (std::size_t d = 0; d < extraction.doc_tokens.size(); ++d)
        for (const auto& lemma : extraction.doc_tokens[d]) {
            int w = extraction.token_index(lemma);
            if (w < 0) fail("E_STATE", "token missing from vocabulary: " + lemma);
            dtm.add(static_cast<int>(d), w, 1.0);
        }
    return dtm;
}

double ntf(const std::vector<std::string>& lemmas, int doc, const WeightMatrix& dtm,
           const ExtractionResult& extraction) {
    if (lemmas.empty()) fail("E_STATE", "empty phrase");
    double sum = 0.0;
    for (const auto& lemma : lemmas) {
        int w = extraction.token_index(lemma);
        if (w < 0) fail("E_STATE", "phrase constituent missing from vocabulary: " + lemma);
        sum += dtm.at(doc, w);
    }
    return sum / static_cast<double>(lemmas.size());
}

double nidf(int df, int conj_df, int n_docs) {
    double numerator = static_cast<double>(n_docs) * df + 1.0;
    double denominator = static_cast<double>(conj_df) * conj_df + 1.0;
    return std::log(numerator / denominator) + 1.0;
}

WeightMatrix build_dpm(const ExtractionResult& extraction, const WeightMatrix& dtm,
                       const DfIndex& df_index) {
    const int n_docs = static_cast<int>(extraction.doc_tokens.size());
    WeightMatrix dpm(MatrixRole::DPM, n_docs, static_cast<int>(extraction.topic_vocab.size()));
    for (int d = 0; d < n_docs; ++d) {
        std::set<std::string> distinct(extraction.doc_topics[d].begin(),
                                       extraction.doc_topics[d].end());
        for (const auto& key : distinct) {
            int t = extraction.topic_index(key);
            if (t < 0) fail("E_STATE", "topic missing from vocabulary: " + key);
            double tf = ntf(split_topic_key(key), d, dtm, extraction);
            double idf = nidf(df_index.topic_df.at(key), df_index.topic_conj_df.at(key), n_docs);
            dpm.set(d, t, tf * idf);
        }
    }
    return dpm;
}

WeightMatrix build_edm(const Corpus& corpus) {
    WeightMatrix edm(MatrixRole::EDM, static_cast<int>(corpus.experts.size()),
                     static_cast<int>(corpus.documents.size()));
    for (const auto& [expert, doc] : corpus.authorship) edm.set(expert, doc, 1.0);
    return edm;
}

WeightMatrix build_etopm(const WeightMatrix& edm, const WeightMatrix& dpm) {
    if (edm.cols() != dpm.rows())
        fail("E_DIM", "EDM is " + std::to_string(edm.rows()) + "x" + std::to_string(edm.cols()) +
                          " but DPM has " + std::to_string(dpm.rows()) + " rows");
    WeightMatrix etopm(MatrixRole::ETopM, edm.rows(), dpm.cols());
    edm.for_each([&](int x, int d, double weight) {
        dpm.for_each_in_row(d, [&](int t, double value) { etopm.add(x, t, weight * value); });
    });
    return etopm;
}

WeightMatrix make_dtopm(const WeightMatrix& dpm) {
    WeightMatrix dtopm(MatrixRole::DTopM, dpm.rows(), dpm.cols());
    dpm.for_each([&](int d, int t, double value) { dtopm.set(d, t, value); });
    return dtopm;
}

} // namespace expertrank
