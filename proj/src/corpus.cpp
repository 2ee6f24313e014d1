#include "expertrank/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "expertrank/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace expertrank {

int Corpus::expert_index(const std::string& label) const {
    auto it = expert_lookup_.find(label);
    return it == expert_lookup_.end() ? -1 : it->second;
}

int Corpus::document_index(const std::string& label) const {
    auto it = document_lookup_.find(label);
    return it == document_lookup_.end() ? -1 : it->second;
}

void Corpus::rebuild_lookup() {
    expert_lookup_.clear();
    document_lookup_.clear();
    for (std::size_t i = 0; i < experts.size(); ++i)
        expert_lookup_.emplace(experts[i], static_cast<int>(i));
    for (std::size_t i = 0; i < documents.size(); ++i)
        document_lookup_.emplace(documents[i].id, static_cast<int>(i));
}

namespace {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("E_IO", "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void reject_bom(const std::string& content, const std::string& path) {
    if (content.size() >= 3 && content.compare(0, 3, "\xEF\xBB\xBF") == 0)
        fail("E_PARSE", path + ": byte order mark not allowed (files must be plain UTF-8)");
}

// Minimal RFC-4180 reader: quoted fields may contain commas, doubled quotes
// and newlines. Returns one vector of fields per record.
std::vector<std::vector<std::string>> parse_csv(const std::string& content,
                                                const std::string& path) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t line = 1;

    auto end_field = [&] {
        fields.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(fields);
        fields.clear();
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        char c = content[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started && !field.empty())
                    fail("E_PARSE", path + ":" + std::to_string(line) +
                                        ": quote inside unquoted field");
                quoted = true;
                field_started = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                break;  // swallow; the \n that follows ends the record
            case '\n':
                end_record();
                ++line;
                break;
            default:
                field += c;
                field_started = true;
        }
    }
    if (quoted) fail("E_PARSE", path + ": unterminated quoted field");
    if (field_started || !fields.empty()) end_record();

    // Drop records that are entirely empty (trailing blank lines).
    std::vector<std::vector<std::string>> cleaned;
    for (auto& record : records) {
        if (record.size() == 1 && record[0].empty()) continue;
        cleaned.push_back(std::move(record));
    }
    return cleaned;
}

void validate(Corpus& corpus, const std::string& origin) {
    if (corpus.documents.empty()) fail("E_EMPTY", origin + ": corpus has no documents");

    corpus.rebuild_lookup();

    std::vector<int> docs_per_expert(corpus.experts.size(), 0);
    std::vector<int> authors_per_doc(corpus.documents.size(), 0);
    for (const auto& [expert, doc] : corpus.authorship) {
        ++docs_per_expert[expert];
        ++authors_per_doc[doc];
    }
    for (std::size_t d = 0; d < corpus.documents.size(); ++d)
        if (authors_per_doc[d] == 0)
            fail("E_ORPHAN", origin + ": document " + corpus.documents[d].id + " has no author");
    for (std::size_t x = 0; x < corpus.experts.size(); ++x)
        if (docs_per_expert[x] == 0)
            fail("E_ORPHAN", origin + ": expert " + corpus.experts[x] + " has no document");
}

// Experts get their dense index at first mention in the authorship sequence.
void add_authorship(Corpus& corpus, std::set<std::pair<std::string, std::string>>& seen,
                    const std::string& expert, const std::string& doc,
                    const std::string& origin) {
    if (expert.empty() || doc.empty())
        fail("E_PARSE", origin + ": authorship record with empty identifier");
    int doc_idx = corpus.document_index(doc);
    if (doc_idx < 0)
        fail("E_REF", origin + ": authorship references unknown document " + doc);
    if (!seen.insert({expert, doc}).second)
        fail("E_DUP", origin + ": duplicate authorship pair (" + expert + ", " + doc + ")");
    int expert_idx = corpus.expert_index(expert);
    if (expert_idx < 0) {
        expert_idx = static_cast<int>(corpus.experts.size());
        corpus.experts.push_back(expert);
        corpus.rebuild_lookup();
    }
    corpus.authorship.emplace_back(expert_idx, doc_idx);
}

Corpus ingest_csv_dir(const std::string& dir) {
    const std::string docs_path = (fs::path(dir) / "documents.csv").string();
    const std::string auth_path = (fs::path(dir) / "authorship.csv").string();

    std::string docs_content = read_text_file(docs_path);
    reject_bom(docs_content, docs_path);
    auto doc_records = parse_csv(docs_content, docs_path);
    if (doc_records.empty() || doc_records[0] != std::vector<std::string>{"doc_id", "text"})
        fail("E_PARSE", docs_path + ": expected header 'doc_id,text'");

    Corpus corpus;
    for (std::size_t i = 1; i < doc_records.size(); ++i) {
        const auto& record = doc_records[i];
        if (record.size() != 2)
            fail("E_PARSE", docs_path + ": record " + std::to_string(i + 1) +
                                " has " + std::to_string(record.size()) + " fields, expected 2");
        if (record[0].empty())
            fail("E_PARSE", docs_path + ": record " + std::to_string(i + 1) + " has empty doc_id");
        if (corpus.document_index(record[0]) >= 0)
            fail("E_DUP", docs_path + ": duplicate document id " + record[0]);
        corpus.documents.push_back({record[0], record[1]});
        corpus.rebuild_lookup();
    }

    std::string auth_content = read_text_file(auth_path);
    reject_bom(auth_content, auth_path);
    auto auth_records = parse_csv(auth_content, auth_path);
    if (auth_records.empty() ||
        auth_records[0] != std::vector<std::string>{"expert_id", "doc_id"})
        fail("E_PARSE", auth_path + ": expected header 'expert_id,doc_id'");

    std::set<std::pair<std::string, std::string>> seen;
    for (std::size_t i = 1; i < auth_records.size(); ++i) {
        const auto& record = auth_records[i];
        if (record.size() != 2)
            fail("E_PARSE", auth_path + ": record " + std::to_string(i + 1) +
                                " has " + std::to_string(record.size()) + " fields, expected 2");
        add_authorship(corpus, seen, record[0], record[1], auth_path);
    }

    validate(corpus, dir);
    return corpus;
}

Corpus parse_corpus_json_text(const std::string& content, const std::string& origin) {
    reject_bom(content, origin);
    json root;
    try {
        root = json::parse(content);
    } catch (const json::exception& e) {
        fail("E_PARSE", origin + ": " + e.what());
    }
    if (!root.is_object() || !root.contains("documents") || !root.contains("authorship"))
        fail("E_PARSE", origin + ": expected object with 'documents' and 'authorship'");

    Corpus corpus;
    for (const auto& entry : root["documents"]) {
        if (!entry.is_object() || !entry.contains("id") || !entry.contains("text") ||
            !entry["id"].is_string() || !entry["text"].is_string())
            fail("E_PARSE", origin + ": document entries need string 'id' and 'text'");
        std::string id = entry["id"].get<std::string>();
        if (id.empty()) fail("E_PARSE", origin + ": document with empty id");
        if (corpus.document_index(id) >= 0)
            fail("E_DUP", origin + ": duplicate document id " + id);
        corpus.documents.push_back({id, entry["text"].get<std::string>()});
        corpus.rebuild_lookup();
    }

    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& entry : root["authorship"]) {
        if (!entry.is_object() || !entry.contains("expert") || !entry.contains("doc") ||
            !entry["expert"].is_string() || !entry["doc"].is_string())
            fail("E_PARSE", origin + ": authorship entries need string 'expert' and 'doc'");
        add_authorship(corpus, seen, entry["expert"].get<std::string>(),
                       entry["doc"].get<std::string>(), origin);
    }

    validate(corpus, origin);
    return corpus;
}

} // namespace

Corpus ingest(const std::string& path, CorpusFormat format) {
    fs::path p(path);
    if (!fs::exists(p)) fail("E_IO", "no such path: " + path);

    if (fs::is_directory(p)) {
        bool has_csv = fs::exists(p / "documents.csv");
        bool has_json = fs::exists(p / "corpus.json");
        if (format == CorpusFormat::autodetect)
            format = has_csv ? CorpusFormat::csv
                             : (has_json ? CorpusFormat::json : CorpusFormat::autodetect);
        if (format == CorpusFormat::csv) return ingest_csv_dir(path);
        if (format == CorpusFormat::json) {
            std::string file = (p / "corpus.json").string();
            return parse_corpus_json_text(read_text_file(file), file);
        }
        fail("E_IO", path + ": found neither documents.csv nor corpus.json");
    }

    if (format == CorpusFormat::csv)
        fail("E_IO", path + ": CSV ingestion needs a directory with documents.csv and authorship.csv");
    return parse_corpus_json_text(read_text_file(path), path);
}

std::string corpus_to_json(const Corpus& corpus) {
    json documents = json::array();
    for (const auto& doc : corpus.documents)
        documents.push_back({{"id", doc.id}, {"text", doc.text}});
    json authorship = json::array();
    for (const auto& [expert, doc] : corpus.authorship)
        authorship.push_back({{"expert", corpus.experts[expert]},
                              {"doc", corpus.documents[doc].id}});
    json root;
    root["documents"] = std::move(documents);
    root["authorship"] = std::move(authorship);
    return root.dump(2) + "\n";
}

Corpus corpus_from_json(const std::string& json_text) {
    return parse_corpus_json_text(json_text, "corpus.json");
}

} // namespace expertrank
