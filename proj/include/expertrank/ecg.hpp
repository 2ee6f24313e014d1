#pragma once

#include <string>
#include <utility>
#include <vector>

#include "expertrank/corpus.hpp"
#include "expertrank/matrices.hpp"

namespace expertrank {

// `interleaved`: documents in ingestion order, each immediately followed by
// its not-yet-seen authors (ascending expert index). `docs_first`: all
// documents, then all experts.
enum class NodeOrdering { interleaved, docs_first };

const char* ordering_name(NodeOrdering ordering);
NodeOrdering ordering_from_name(const std::string& name);

// Expert collaboration graph: a directed bipartite graph with one
// document -> expert edge per authorship pair, plus the frozen node ordering
// that fixes the layout of every |V|-dimensional vector, and the padded count
// vectors used by the reinforcement updates. c_x holds each expert's document
// count at expert positions; c_d holds each document's author count at
// document positions; both hold 1 at off-role positions so no division can
// hit zero.
struct Ecg {
    std::vector<std::string> node_labels;        // the ordering s
    std::vector<char> node_is_doc;               // role per node position
    std::vector<int> doc_node;                   // document index -> node position
    std::vector<int> expert_node;                // expert index -> node position
    std::vector<std::pair<int, int>> edges;      // (doc position, expert position), sorted
    std::vector<double> c_x;
    std::vector<double> c_d;

    int size() const { return static_cast<int>(node_labels.size()); }

    std::vector<double> mul(const std::vector<double>& v) const;    // M * v
    std::vector<double> mul_t(const std::vector<double>& v) const;  // M^T * v

    WeightMatrix adjacency() const;  // |V| x |V|, role "M"
};

Ecg build_ecg(const Corpus& corpus, NodeOrdering ordering);

std::pair<std::vector<double>, std::vector<double>> count_vectors(const Ecg& ecg);

} // namespace expertrank
