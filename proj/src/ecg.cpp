#include "expertrank/ecg.hpp"

#include <algorithm>

#include "expertrank/errors.hpp"

namespace expertrank {

const char* ordering_name(NodeOrdering ordering) {
    return ordering == NodeOrdering::interleaved ? "interleaved" : "docs_first";
}

NodeOrdering ordering_from_name(const std::string& name) {
    if (name == "interleaved") return NodeOrdering::interleaved;
    if (name == "docs_first") return NodeOrdering::docs_first;
    fail("E_FORMAT", "unknown node ordering: " + name);
}

Ecg build_ecg(const Corpus& corpus, NodeOrdering ordering) {
    const int n_docs = static_cast<int>(corpus.documents.size());
    const int n_experts = static_cast<int>(corpus.experts.size());

    // Authors per document, ascending expert index.
    std::vector<std::vector<int>> authors(n_docs);
    for (const auto& [expert, doc] : corpus.authorship) authors[doc].push_back(expert);
    for (auto& list : authors) std::sort(list.begin(), list.end());

    Ecg ecg;
    ecg.doc_node.assign(n_docs, -1);
    ecg.expert_node.assign(n_experts, -1);

    auto place_doc = [&](int d) {
        ecg.doc_node[d] = ecg.size();
        ecg.node_labels.push_back(corpus.documents[d].id);
        ecg.node_is_doc.push_back(1);
    };
    auto place_expert = [&](int x) {
        ecg.expert_node[x] = ecg.size();
        ecg.node_labels.push_back(corpus.experts[x]);
        ecg.node_is_doc.push_back(0);
    };

    if (ordering == NodeOrdering::interleaved) {
        // Documents in ingestion order, each followed by its not-yet-placed
        // authors in ascending expert index.
        for (int d = 0; d < n_docs; ++d) {
            place_doc(d);
            for (int x : authors[d])
                if (ecg.expert_node[x] < 0) place_expert(x);
        }
    } else {
        for (int d = 0; d < n_docs; ++d) place_doc(d);
        for (int x = 0; x < n_experts; ++x) place_expert(x);
    }

    for (int d = 0; d < n_docs; ++d)
        for (int x : authors[d]) ecg.edges.emplace_back(ecg.doc_node[d], ecg.expert_node[x]);
    std::sort(ecg.edges.begin(), ecg.edges.end());

    // Count vectors, padded with 1 at off-role positions so the element-wise
    // divisions in the reinforcement updates are always defined.
    const int v = ecg.size();
    ecg.c_x.assign(v, 1.0);
    ecg.c_d.assign(v, 1.0);
    std::vector<int> in_degree(v, 0);
    std::vector<int> out_degree(v, 0);
    for (const auto& [doc_pos, expert_pos] : ecg.edges) {
        ++out_degree[doc_pos];
        ++in_degree[expert_pos];
    }
    for (int i = 0; i < v; ++i) {
        if (ecg.node_is_doc[i]) {
            ecg.c_d[i] = static_cast<double>(out_degree[i]);
        } else {
            ecg.c_x[i] = static_cast<double>(in_degree[i]);
        }
    }
    return ecg;
}

std::pair<std::vector<double>, std::vector<double>> count_vectors(const Ecg& ecg) {
    return {ecg.c_x, ecg.c_d};
}

std::vector<double> Ecg::mul(const std::vector<double>& v) const {
    if (static_cast<int>(v.size()) != size()) fail("E_DIM", "vector length != |V|");
    std::vector<double> out(v.size(), 0.0);
    for (const auto& [doc_pos, expert_pos] : edges) out[doc_pos] += v[expert_pos];
    return out;
}

std::vector<double> Ecg::mul_t(const std::vector<double>& v) const {
    if (static_cast<int>(v.size()) != size()) fail("E_DIM", "vector length != |V|");
    std::vector<double> out(v.size(), 0.0);
    for (const auto& [doc_pos, expert_pos] : edges) out[expert_pos] += v[doc_pos];
    return out;
}

WeightMatrix Ecg::adjacency() const {
    WeightMatrix m(MatrixRole::Adjacency, size(), size());
    for (const auto& [doc_pos, expert_pos] : edges) m.set(doc_pos, expert_pos, 1.0);
    return m;
}

} // namespace expertrank
