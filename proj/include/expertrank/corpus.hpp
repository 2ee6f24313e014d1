#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace expertrank {

struct Document {
    std::string id;
    std::string text;
};

// The expert/document universe everything else indexes into. Labels receive
// dense 0-based indices in first-seen order: documents by input order, experts
// by first appearance in the authorship list. Indices are never reassigned, so
// every downstream matrix dimension is reproducible from the input file alone.
struct Corpus {
    std::vector<std::string> experts;             // expert index -> label
    std::vector<Document> documents;              // document index -> (label, text)
    std::vector<std::pair<int, int>> authorship;  // (expert, document), ingestion order, unique

    int expert_index(const std::string& label) const;    // -1 when unknown
    int document_index(const std::string& label) const;  // -1 when unknown

    void rebuild_lookup();  // refresh label->index maps after direct member edits

private:
    std::unordered_map<std::string, int> expert_lookup_;
    std::unordered_map<std::string, int> document_lookup_;
};

enum class CorpusFormat { autodetect, csv, json };

// `path` is either a directory holding documents.csv + authorship.csv (CSV
// format) or corpus.json (JSON format), or a direct path to a JSON file.
// Validation is strict: dangling references, orphan experts/documents,
// duplicate authorship pairs, empty corpora and BOMs are all hard errors.
Corpus ingest(const std::string& path, CorpusFormat format = CorpusFormat::autodetect);

// Canonical JSON serialization; re-ingesting it reproduces index assignments.
std::string corpus_to_json(const Corpus& corpus);
Corpus corpus_from_json(const std::string& json_text);

} // namespace expertrank
