#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "expertrank/corpus.hpp"
#include "expertrank/extractor.hpp"

namespace expertrank {

enum class MatrixRole { DTM, DPM, EDM, ETopM, DTopM, RETopM, Adjacency };

const char* role_name(MatrixRole role);             // Adjacency prints as "M"
MatrixRole role_from_name(const std::string& name); // case-insensitive

// Sparse 2-D matrix with a fixed role. Entries are kept in row-major order so
// every iteration, export, and load is deterministic. Stored values are
// canonicalized through the 9-significant-digit text representation used by
// the on-disk format; in-memory and persisted matrices are therefore bitwise
// interchangeable, which keeps staged pipelines identical to one-shot runs.
// Zero assignments erase; non-finite values are rejected; negatives are kept
// (phrase IDF weights can legitimately go negative).
class WeightMatrix {
public:
    WeightMatrix(MatrixRole role, int rows, int cols);

    MatrixRole role() const { return role_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t nnz() const { return entries_.size(); }

    void set(int row, int col, double value);
    void add(int row, int col, double value);  // accumulate, then canonicalize
    double at(int row, int col) const;         // 0 when absent

    std::vector<double> column(int col) const;  // dense
    std::vector<double> row(int r) const;       // dense

    template <typename F>
    void for_each(F&& f) const {  // f(row, col, value), row-major
        for (const auto& [key, value] : entries_) f(key.first, key.second, value);
    }

    template <typename F>
    void for_each_in_row(int r, F&& f) const {  // f(col, value), ascending col
        for (auto it = entries_.lower_bound({r, 0});
             it != entries_.end() && it->first.first == r; ++it)
            f(it->first.second, it->second);
    }

    bool equal(const WeightMatrix& other, double tolerance) const;

private:
    void check_bounds(int row, int col) const;

    MatrixRole role_;
    int rows_;
    int cols_;
    std::map<std::pair<int, int>, double> entries_;
};

// Round a value through the persisted text form (9 significant digits).
double canonical_value(double value);

// Document frequencies backing the phrase IDF: df(t) counts documents where
// the phrase was extracted; conj_df(t) counts documents containing every
// constituent token of the phrase (the conjunction of binarized DTM columns).
struct DfIndex {
    std::unordered_map<std::string, int> token_df;
    std::unordered_map<std::string, int> topic_df;
    std::unordered_map<std::string, int> topic_conj_df;
};

DfIndex build_df_index(const ExtractionResult& extraction);

// DTM[d, w] = raw count of token w in document d.
WeightMatrix build_dtm(const ExtractionResult& extraction);

// Mean term frequency of the phrase's constituent lemmas in one document:
// a repeated lemma counts once per slot, and the sum is divided by |t|.
double ntf(const std::vector<std::string>& lemmas, int doc, const WeightMatrix& dtm,
           const ExtractionResult& extraction);

// nIDF(t) = ln((n_docs * df + 1) / (conj_df^2 + 1)) + 1. Natural log; the
// result can be negative when the constituents co-occur far more often than
// the phrase itself, and is kept unclamped.
double nidf(int df, int conj_df, int n_docs);

// DPM[d, t] = nTF(t, d) * nIDF(t), stored only where t was extracted in d.
WeightMatrix build_dpm(const ExtractionResult& extraction, const WeightMatrix& dtm,
                       const DfIndex& df_index);

// Binary authorship matrix: EDM[x, d] = 1 iff x authored d.
WeightMatrix build_edm(const Corpus& corpus);

// ETopM = EDM * DPM (experts x topics).
WeightMatrix build_etopm(const WeightMatrix& edm, const WeightMatrix& dpm);

// DTopM is DPM under its own role (documents x topics).
WeightMatrix make_dtopm(const WeightMatrix& dpm);

} // namespace expertrank
