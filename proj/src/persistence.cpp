#include "expertrank/persistence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "json.hpp"

#include "expertrank/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace expertrank {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char byte : bytes) {
        hash ^= byte;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string checksum_string(std::string_view bytes) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t hash = fnv1a64(bytes);
    std::string out = "fnv1a64:";
    for (int shift = 60; shift >= 0; shift -= 4) out += digits[(hash >> shift) & 0xf];
    return out;
}

std::string format_double(double value) {
    if (!std::isfinite(value)) fail("E_NUMERIC", "cannot render a non-finite value");
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 9);
    if (ec != std::errc()) fail("E_NUMERIC", "cannot render value as text");
    return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        fail("E_FORMAT", "malformed real value: '" + text + "'");
    return value;
}

std::string matrix_to_text(const WeightMatrix& matrix) {
    std::string out = role_name(matrix.role());
    out += ' ';
    out += std::to_string(matrix.rows());
    out += ' ';
    out += std::to_string(matrix.cols());
    out += ' ';
    out += std::to_string(matrix.nnz());
    out += '\n';
    matrix.for_each([&](int r, int c, double v) {
        out += std::to_string(r);
        out += ' ';
        out += std::to_string(c);
        out += ' ';
        out += format_double(v);
        out += '\n';
    });
    return out;
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string field;
    while (in >> field) fields.push_back(field);
    return fields;
}

int parse_int(const std::string& text, const std::string& origin) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        fail("E_FORMAT", origin + ": malformed integer '" + text + "'");
    return value;
}

} // namespace

WeightMatrix matrix_from_text(const std::string& text, const std::string& origin) {
    std::vector<std::string> lines = split_lines(text);
    if (lines.empty()) fail("E_FORMAT", origin + ": empty matrix file");

    std::vector<std::string> header = split_fields(lines[0]);
    if (header.size() != 4)
        fail("E_FORMAT", origin + ": header must be 'role rows cols nnz'");
    MatrixRole role = role_from_name(header[0]);
    int rows = parse_int(header[1], origin);
    int cols = parse_int(header[2], origin);
    int nnz = parse_int(header[3], origin);
    if (rows < 0 || cols < 0 || nnz < 0)
        fail("E_FORMAT", origin + ": negative dimension in header");

    WeightMatrix matrix(role, rows, cols);
    int seen = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        std::vector<std::string> fields = split_fields(lines[i]);
        if (fields.size() != 3)
            fail("E_FORMAT", origin + ": entry line must be 'row col value'");
        int r = parse_int(fields[0], origin);
        int c = parse_int(fields[1], origin);
        matrix.set(r, c, parse_double(fields[2]));
        ++seen;
    }
    if (seen != nnz)
        fail("E_FORMAT", origin + ": header announces " + std::to_string(nnz) +
                             " entries, file holds " + std::to_string(seen));
    return matrix;
}

void save_matrix(const WeightMatrix& matrix, const std::string& path) {
    write_file_atomic(path, matrix_to_text(matrix));
}

WeightMatrix load_matrix(const std::string& path) {
    return matrix_from_text(read_file(path), path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("E_IO", "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) fail("E_IO", "cannot read " + path);
    return buffer.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail("E_IO", "cannot open " + tmp + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            fail("E_IO", "cannot write " + tmp);
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        fail("E_IO", "cannot rename " + tmp + ": " + ec.message());
    }
}

namespace {

// Collects artifact files as they are written so the manifest can list each
// one with its checksum. Every file goes through write_file_atomic.
struct ArtifactWriter {
    std::string directory;
    json inventory = json::object();

    void put(const std::string& name, const std::string& content) {
        write_file_atomic(directory + "/" + name, content);
        inventory[name] = checksum_string(content);
    }
};

std::string vocab_to_text(const std::vector<std::string>& vocab) {
    std::string out;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        out += std::to_string(i);
        out += '\t';
        out += vocab[i];
        out += '\n';
    }
    return out;
}

std::vector<std::string> vocab_from_text(const std::string& text, const std::string& origin) {
    std::vector<std::string> vocab;
    for (const std::string& line : split_lines(text)) {
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            fail("E_FORMAT", origin + ": vocabulary line is missing its tab separator");
        int index = parse_int(line.substr(0, tab), origin);
        if (index != static_cast<int>(vocab.size()))
            fail("E_FORMAT", origin + ": vocabulary indices must be contiguous from 0");
        vocab.push_back(line.substr(tab + 1));
    }
    return vocab;
}

std::string doc_lines_to_text(const Corpus& corpus,
                              const std::vector<std::vector<std::string>>& per_doc) {
    std::string out;
    for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
        out += "#DOC ";
        out += corpus.documents[d].id;
        out += '\n';
        for (const std::string& entry : per_doc[d]) {
            out += entry;
            out += '\n';
        }
    }
    return out;
}

std::vector<std::vector<std::string>> doc_lines_from_text(const std::string& text,
                                                          const Corpus& corpus,
                                                          const std::string& origin) {
    std::vector<std::vector<std::string>> per_doc(corpus.documents.size());
    std::vector<char> seen(corpus.documents.size(), 0);
    int current = -1;
    for (const std::string& line : split_lines(text)) {
        if (line.empty()) continue;
        if (line.rfind("#DOC ", 0) == 0) {
            const std::string id = line.substr(5);
            current = corpus.document_index(id);
            if (current < 0) fail("E_REF", origin + ": unknown document '" + id + "'");
            if (seen[current]) fail("E_FORMAT", origin + ": duplicate section for '" + id + "'");
            seen[current] = 1;
            continue;
        }
        if (current < 0) fail("E_FORMAT", origin + ": entry before any #DOC header");
        per_doc[current].push_back(line);
    }
    return per_doc;
}

std::string edges_to_text(const Ecg& ecg) {
    std::string out;
    for (const auto& [doc_pos, expert_pos] : ecg.edges) {
        out += ecg.node_labels[doc_pos];
        out += " -> ";
        out += ecg.node_labels[expert_pos];
        out += '\n';
    }
    return out;
}

Ecg ecg_from_parts(const std::vector<std::string>& nodes, const std::string& edges_text,
                   const Corpus& corpus) {
    Ecg ecg;
    ecg.node_labels = nodes;
    ecg.node_is_doc.assign(nodes.size(), 0);
    ecg.doc_node.assign(corpus.documents.size(), -1);
    ecg.expert_node.assign(corpus.experts.size(), -1);

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        int d = corpus.document_index(nodes[i]);
        if (d >= 0) {
            ecg.node_is_doc[i] = 1;
            ecg.doc_node[d] = static_cast<int>(i);
            continue;
        }
        int x = corpus.expert_index(nodes[i]);
        if (x < 0) fail("E_REF", "graph node '" + nodes[i] + "' is neither a document nor an expert");
        ecg.expert_node[x] = static_cast<int>(i);
    }
    for (std::size_t d = 0; d < ecg.doc_node.size(); ++d)
        if (ecg.doc_node[d] < 0)
            fail("E_FORMAT", "graph ordering is missing document '" + corpus.documents[d].id + "'");
    for (std::size_t x = 0; x < ecg.expert_node.size(); ++x)
        if (ecg.expert_node[x] < 0)
            fail("E_FORMAT", "graph ordering is missing expert '" + corpus.experts[x] + "'");

    for (const std::string& line : split_lines(edges_text)) {
        if (line.empty()) continue;
        std::size_t sep = line.find(" -> ");
        if (sep == std::string::npos)
            fail("E_FORMAT", "ecg_edges.txt: edge line must be 'doc -> expert'");
        int d = corpus.document_index(line.substr(0, sep));
        int x = corpus.expert_index(line.substr(sep + 4));
        if (d < 0 || x < 0) fail("E_REF", "ecg_edges.txt: edge references an unknown label");
        ecg.edges.emplace_back(ecg.doc_node[d], ecg.expert_node[x]);
    }
    std::sort(ecg.edges.begin(), ecg.edges.end());

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
        if (ecg.node_is_doc[i])
            ecg.c_d[i] = static_cast<double>(out_degree[i]);
        else
            ecg.c_x[i] = static_cast<double>(in_degree[i]);
    }
    return ecg;
}

const char* tagger_name(TaggerMode mode) {
    return mode == TaggerMode::builtin ? "builtin" : "pretagged";
}

TaggerMode tagger_from_name(const std::string& name) {
    if (name == "builtin") return TaggerMode::builtin;
    if (name == "pretagged") return TaggerMode::pretagged;
    fail("E_FORMAT", "unknown tagger mode: " + name);
}

} // namespace

void save_index(const std::string& directory, const Index& index) {
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) fail("E_IO", "cannot create " + directory + ": " + ec.message());

    ArtifactWriter writer{directory};
    json manifest;
    manifest["format_version"] = 1;

    const std::string corpus_json = corpus_to_json(index.corpus);
    writer.put("corpus.json", corpus_json);
    manifest["corpus_fingerprint"] = checksum_string(corpus_json);

    std::string stopword_text;
    for (const std::string& word : index.config.stopwords) {
        stopword_text += word;
        stopword_text += '\n';
    }
    writer.put("stopwords.txt", stopword_text);

    std::string lexicon_text;
    for (const auto& [word, tag] : index.config.lexicon) {
        lexicon_text += word;
        lexicon_text += '\t';
        lexicon_text += tag;
        lexicon_text += '\n';
    }
    writer.put("lexicon.tsv", lexicon_text);

    manifest["extraction"] = {{"max_len", index.config.max_len},
                              {"pattern", index.config.pattern},
                              {"tagger", tagger_name(index.config.tagger)}};

    if (index.extraction) {
        const ExtractionResult& extraction = *index.extraction;
        writer.put("tokens.txt", doc_lines_to_text(index.corpus, extraction.doc_tokens));
        writer.put("topics.txt", doc_lines_to_text(index.corpus, extraction.doc_topics));
        writer.put("vocab_tokens.tsv", vocab_to_text(extraction.token_vocab));
        writer.put("vocab_topics.tsv", vocab_to_text(extraction.topic_vocab));
    }

    if (index.ecg && index.ordering) {
        manifest["ordering"] = {{"mode", ordering_name(*index.ordering)},
                                {"nodes", index.ecg->node_labels}};
        std::string ordering_text;
        for (const std::string& label : index.ecg->node_labels) {
            ordering_text += label;
            ordering_text += '\n';
        }
        writer.put("ecg_ordering.txt", ordering_text);
        writer.put("ecg_edges.txt", edges_to_text(*index.ecg));
        writer.put("ecg_adj.mat", matrix_to_text(index.ecg->adjacency()));
    }

    auto put_matrix = [&](const char* name, const std::optional<WeightMatrix>& matrix) {
        if (matrix) writer.put(name, matrix_to_text(*matrix));
    };
    put_matrix("dtm.mat", index.dtm);
    put_matrix("dpm.mat", index.dpm);
    put_matrix("edm.mat", index.edm);
    put_matrix("etopm.mat", index.etopm);
    put_matrix("dtopm.mat", index.dtopm);
    put_matrix("retopm.mat", index.retopm);

    if (index.cohits) {
        manifest["cohits"] = {{"lambda_x", index.cohits->lambda_x},
                              {"lambda_d", index.cohits->lambda_d},
                              {"iterations", index.cohits->iterations},
                              {"hub_init", hub_init_name(index.cohits->hub_init)},
                              {"authority_init", authority_init_name(index.cohits->authority_init)},
                              {"threads", index.cohits->threads}};
    }

    if (index.retopm) {
        std::string diagnostics;
        for (const TopicDiagnostics& topic : index.report.topics) {
            json line = {{"topic", topic.topic},
                         {"zero_seed", topic.zero_seed},
                         {"iterations_run", topic.iterations_run},
                         {"a_norm", topic.a_norm},
                         {"h_norm", topic.h_norm}};
            diagnostics += line.dump();
            diagnostics += '\n';
        }
        writer.put("diagnostics.jsonl", diagnostics);
    }

    manifest["files"] = writer.inventory;
    write_file_atomic(directory + "/manifest.json", manifest.dump(2) + "\n");
}

Index load_index(const std::string& directory) {
    const std::string manifest_text = read_file(directory + "/manifest.json");
    json manifest;
    try {
        manifest = json::parse(manifest_text);
    } catch (const json::exception& e) {
        fail("E_PARSE", "manifest.json: " + std::string(e.what()));
    }

    if (!manifest.contains("format_version") || !manifest["format_version"].is_number_integer())
        fail("E_FORMAT", "manifest.json: missing format_version");
    if (manifest["format_version"].get<int>() != 1)
        fail("E_VERSION", "index format version " + manifest["format_version"].dump() +
                              " is not supported (this build reads version 1)");
    if (!manifest.contains("files") || !manifest["files"].is_object())
        fail("E_FORMAT", "manifest.json: missing file inventory");

    std::map<std::string, std::string> contents;
    for (const auto& [name, sum] : manifest["files"].items()) {
        std::string text = read_file(directory + "/" + name);
        if (!sum.is_string() || checksum_string(text) != sum.get<std::string>())
            fail("E_CHECKSUM", "checksum mismatch: " + name);
        contents.emplace(name, std::move(text));
    }

    auto need = [&](const std::string& name) -> const std::string& {
        auto it = contents.find(name);
        if (it == contents.end()) fail("E_FORMAT", "manifest.json: no inventory entry for " + name);
        return it->second;
    };
    auto have = [&](const char* name) { return contents.count(name) != 0; };

    Index index;
    index.corpus = corpus_from_json(need("corpus.json"));
    if (manifest.value("corpus_fingerprint", "") != checksum_string(contents.at("corpus.json")))
        fail("E_CHECKSUM", "corpus fingerprint does not match corpus.json");

    if (!manifest.contains("extraction") || !manifest["extraction"].is_object())
        fail("E_FORMAT", "manifest.json: missing extraction snapshot");
    const json& extraction_info = manifest["extraction"];
    try {
        index.config.max_len = extraction_info.at("max_len").get<int>();
        index.config.pattern = extraction_info.at("pattern").get<std::string>();
        index.config.tagger = tagger_from_name(extraction_info.at("tagger").get<std::string>());
    } catch (const json::exception& e) {
        fail("E_FORMAT", "manifest.json: bad extraction snapshot: " + std::string(e.what()));
    }
    index.config.stopwords = parse_stopwords(need("stopwords.txt"));
    index.config.lexicon = parse_lexicon(need("lexicon.tsv"));

    if (have("tokens.txt")) {
        ExtractionResult extraction;
        extraction.doc_tokens = doc_lines_from_text(need("tokens.txt"), index.corpus, "tokens.txt");
        extraction.doc_topics = doc_lines_from_text(need("topics.txt"), index.corpus, "topics.txt");
        extraction.token_vocab = vocab_from_text(need("vocab_tokens.tsv"), "vocab_tokens.tsv");
        extraction.topic_vocab = vocab_from_text(need("vocab_topics.tsv"), "vocab_topics.tsv");
        extraction.rebuild_lookup();
        index.extraction = std::move(extraction);
    }

    if (manifest.contains("ordering")) {
        std::vector<std::string> nodes;
        try {
            index.ordering = ordering_from_name(manifest["ordering"].at("mode").get<std::string>());
            nodes = manifest["ordering"].at("nodes").get<std::vector<std::string>>();
        } catch (const json::exception& e) {
            fail("E_FORMAT", "manifest.json: bad ordering: " + std::string(e.what()));
        }
        index.ecg = ecg_from_parts(nodes, need("ecg_edges.txt"), index.corpus);
    }

    auto load_optional_matrix = [&](const char* name) -> std::optional<WeightMatrix> {
        if (!contents.count(name)) return std::nullopt;
        return matrix_from_text(contents.at(name), name);
    };
    index.dtm = load_optional_matrix("dtm.mat");
    index.dpm = load_optional_matrix("dpm.mat");
    index.edm = load_optional_matrix("edm.mat");
    index.etopm = load_optional_matrix("etopm.mat");
    index.dtopm = load_optional_matrix("dtopm.mat");
    index.retopm = load_optional_matrix("retopm.mat");

    if (manifest.contains("cohits")) {
        CoHitsParams params;
        try {
            const json& c = manifest["cohits"];
            params.lambda_x = c.at("lambda_x").get<double>();
            params.lambda_d = c.at("lambda_d").get<double>();
            params.iterations = c.at("iterations").get<int>();
            params.hub_init = hub_init_from_name(c.at("hub_init").get<std::string>());
            params.authority_init = authority_init_from_name(c.at("authority_init").get<std::string>());
            params.threads = c.at("threads").get<int>();
        } catch (const json::exception& e) {
            fail("E_FORMAT", "manifest.json: bad cohits parameters: " + std::string(e.what()));
        }
        params.validate();
        index.cohits = params;
    }

    if (have("diagnostics.jsonl")) {
        for (const std::string& line : split_lines(contents.at("diagnostics.jsonl"))) {
            if (line.empty()) continue;
            json entry;
            try {
                entry = json::parse(line);
                TopicDiagnostics topic;
                topic.topic = entry.at("topic").get<int>();
                topic.zero_seed = entry.at("zero_seed").get<bool>();
                topic.iterations_run = entry.at("iterations_run").get<int>();
                topic.a_norm = entry.at("a_norm").get<double>();
                topic.h_norm = entry.at("h_norm").get<double>();
                index.report.topics.push_back(topic);
                if (topic.zero_seed) ++index.report.zero_seed_count;
            } catch (const json::exception& e) {
                fail("E_FORMAT", "diagnostics.jsonl: " + std::string(e.what()));
            }
        }
    }

    return index;
}

} // namespace expertrank
