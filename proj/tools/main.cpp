#include <cstdlib>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "expertrank/errors.hpp"
#include "expertrank/persistence.hpp"
#include "expertrank/pipeline.hpp"
#include "expertrank/ranking.hpp"

using namespace expertrank;

namespace {

// Flag problems detected after CLI11 parsing (e.g. an option that is only
// required in combination with another). Reported like any usage error: exit 2.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExtractionFlags {
    int max_len = 3;
    std::string pattern = "(JJ)* (NN|NNS|NNP)+";
    std::string tagger = "builtin";
    std::string pretagged;
    std::string stopwords;

    void attach(CLI::App* cmd) {
        cmd->add_option("--max-len", max_len, "Longest phrase kept, in tokens")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--pattern", pattern, "POS pattern that defines a phrase")
            ->capture_default_str();
        cmd->add_option("--tagger", tagger, "POS tagger mode")
            ->capture_default_str()
            ->check(CLI::IsMember({"builtin", "pretagged"}));
        cmd->add_option("--pretagged", pretagged,
                        "Pretagged token file, required with --tagger pretagged");
        cmd->add_option("--stopwords", stopwords,
                        "Stopword file replacing the built-in list "
                        "(EXPERTRANK_STOPWORDS overrides the default too)");
    }

    ExtractionConfig config() const {
        ExtractionConfig config = ExtractionConfig::defaults();
        config.max_len = max_len;
        config.pattern = pattern;
        if (tagger == "pretagged") {
            if (pretagged.empty())
                throw usage_error("--tagger pretagged requires --pretagged <file>");
            config.tagger = TaggerMode::pretagged;
            config.pretagged_path = pretagged;
        }
        std::string stopword_path = stopwords;
        if (stopword_path.empty())
            if (const char* env = std::getenv("EXPERTRANK_STOPWORDS"))
                if (*env) stopword_path = env;
        if (!stopword_path.empty()) config.stopwords = parse_stopwords(read_file(stopword_path));
        return config;
    }
};

struct CohitsFlags {
    double lambda_x = 1.0;
    double lambda_d = 0.7;
    int iterations = 5;
    std::string hub_init = "nvsm";
    std::string authority_init = "nvsm";
    int threads = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--lambda-x", lambda_x, "Graph weight in the authority update")
            ->capture_default_str()
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--lambda-d", lambda_d, "Graph weight in the hub update")
            ->capture_default_str()
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--iterations", iterations, "Reinforcement iterations per topic")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--hub-init", hub_init, "Hub seed")
            ->capture_default_str()
            ->check(CLI::IsMember({"nvsm", "uniform_docs"}));
        cmd->add_option("--authority-init", authority_init, "Authority seed")
            ->capture_default_str()
            ->check(CLI::IsMember({"nvsm", "uniform_experts"}));
        cmd->add_option("--threads", threads, "Worker threads (output is independent of N)")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
    }

    CoHitsParams params() const {
        CoHitsParams params;
        params.lambda_x = lambda_x;
        params.lambda_d = lambda_d;
        params.iterations = iterations;
        params.hub_init = hub_init_from_name(hub_init);
        params.authority_init = authority_init_from_name(authority_init);
        params.threads = threads;
        return params;
    }
};

CorpusFormat format_from_flag(const std::string& name) {
    if (name == "csv") return CorpusFormat::csv;
    if (name == "json") return CorpusFormat::json;
    return CorpusFormat::autodetect;
}

void print_ranked(const RankedList& list, const std::string& format) {
    if (format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < list.entries.size(); ++i)
            rows.push_back({{"rank", i + 1},
                            {"label", list.entries[i].label},
                            {"score", canonical_value(list.entries[i].score)}});
        std::cout << rows.dump(2) << "\n";
        if (list.fallback_used)
            std::cerr << "note: no exact topic match; averaged topics sharing query lemmas\n";
        if (list.no_match) std::cerr << "note: no topic matches the query\n";
        return;
    }
    if (list.fallback_used)
        std::cout << "# no exact topic match; averaged topics sharing query lemmas\n";
    if (list.no_match) std::cout << "# no topic matches the query\n";
    for (std::size_t i = 0; i < list.entries.size(); ++i)
        std::cout << (i + 1) << '\t' << list.entries[i].label << '\t'
                  << format_double(list.entries[i].score) << '\n';
}

void print_report(const ReinforceReport& report) {
    for (const TopicDiagnostics& topic : report.topics) {
        nlohmann::json line = {{"topic", topic.topic},
                               {"zero_seed", topic.zero_seed},
                               {"iterations_run", topic.iterations_run},
                               {"a_norm", topic.a_norm},
                               {"h_norm", topic.h_norm}};
        std::cout << line.dump() << "\n";
    }
    nlohmann::json summary = {{"topics", report.topics.size()},
                              {"zero_seed_count", report.zero_seed_count}};
    std::cout << summary.dump() << "\n";
}

void print_matrix_dense(const WeightMatrix& matrix) {
    for (int r = 0; r < matrix.rows(); ++r) {
        std::vector<double> row = matrix.row(r);
        for (int c = 0; c < matrix.cols(); ++c) {
            if (c) std::cout << ' ';
            std::cout << format_double(row[c]);
        }
        std::cout << '\n';
    }
}

void run_inspect(const Index& index, const std::string& matrix_name,
                 const std::string& vector_name, bool sparse) {
    if (matrix_name.empty() == vector_name.empty())
        throw usage_error("inspect needs exactly one of --matrix or --vector");

    if (!matrix_name.empty()) {
        MatrixRole role = role_from_name(matrix_name);
        std::optional<WeightMatrix> materialized;
        const std::optional<WeightMatrix>* slot = nullptr;
        switch (role) {
            case MatrixRole::DTM: slot = &index.dtm; break;
            case MatrixRole::DPM: slot = &index.dpm; break;
            case MatrixRole::EDM: slot = &index.edm; break;
            case MatrixRole::ETopM: slot = &index.etopm; break;
            case MatrixRole::DTopM: slot = &index.dtopm; break;
            case MatrixRole::RETopM: slot = &index.retopm; break;
            case MatrixRole::Adjacency:
                if (!index.ecg) fail("E_STATE", "index has no graph yet (run build)");
                materialized = index.ecg->adjacency();
                slot = &materialized;
                break;
        }
        if (!slot || !*slot)
            fail("E_STATE", "matrix " + matrix_name + " is not present in this index");
        if (sparse)
            std::cout << matrix_to_text(**slot);
        else
            print_matrix_dense(**slot);
        return;
    }

    if (vector_name == "ordering") {
        if (!index.ecg) fail("E_STATE", "index has no graph yet (run build)");
        for (const std::string& label : index.ecg->node_labels) std::cout << label << '\n';
        return;
    }
    if (vector_name == "c_x" || vector_name == "c_d") {
        if (!index.ecg) fail("E_STATE", "index has no graph yet (run build)");
        const std::vector<double>& v =
            vector_name == "c_x" ? index.ecg->c_x : index.ecg->c_d;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) std::cout << ' ';
            std::cout << format_double(v[i]);
        }
        std::cout << '\n';
        return;
    }
    throw usage_error("unknown vector '" + vector_name + "' (choose c_x, c_d or ordering)");
}

int run(int argc, char** argv) {
    CLI::App app{"Expert finding over a document corpus: phrase extraction, "
                 "topic weighting, and bipartite-graph reinforcement"};
    app.require_subcommand(1);

    auto* ingest_cmd = app.add_subcommand("ingest", "Read a corpus, write a fresh index");
    std::string ingest_in, ingest_out, ingest_format = "auto";
    ingest_cmd->add_option("--in", ingest_in,
                           "Corpus: directory with documents.csv + authorship.csv, "
                           "directory with corpus.json, or a JSON file")
        ->required();
    ingest_cmd->add_option("--out", ingest_out, "Index directory to create")->required();
    ingest_cmd->add_option("--format", ingest_format, "Corpus format")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "csv", "json"}));

    auto* extract_cmd = app.add_subcommand("extract", "Tokenize, tag and chunk every document");
    std::string extract_index;
    extract_cmd->add_option("--index", extract_index, "Index directory")->required();
    ExtractionFlags extract_flags;
    extract_flags.attach(extract_cmd);

    auto* build_cmd = app.add_subcommand("build", "Build the weight matrices and the graph");
    std::string build_index, build_ordering = "interleaved";
    build_cmd->add_option("--index", build_index, "Index directory")->required();
    build_cmd->add_option("--ordering", build_ordering, "Graph node ordering")
        ->capture_default_str()
        ->check(CLI::IsMember({"interleaved", "docs_first"}));

    auto* reinforce_cmd = app.add_subcommand("reinforce", "Run the per-topic score reinforcement");
    std::string reinforce_index;
    bool reinforce_report = false;
    reinforce_cmd->add_option("--index", reinforce_index, "Index directory")->required();
    reinforce_cmd->add_flag("--report", reinforce_report,
                            "Print per-topic diagnostics as line-delimited JSON");
    CohitsFlags reinforce_flags;
    reinforce_flags.attach(reinforce_cmd);

    auto* rank_cmd = app.add_subcommand("rank", "Rank experts for a query");
    std::string rank_index, rank_query, rank_format = "tsv";
    int rank_top_k = 10;
    bool rank_exact = false;
    rank_cmd->add_option("--index", rank_index, "Index directory")->required();
    rank_cmd->add_option("--query", rank_query, "Free-text query")->required();
    rank_cmd->add_option("--top-k", rank_top_k, "Entries to print")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    rank_cmd->add_option("--format", rank_format, "Output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"tsv", "json"}));
    rank_cmd->add_flag("--exact-only", rank_exact, "Fail rather than fall back when the "
                                                   "query is not a known topic");

    auto* profile_cmd = app.add_subcommand("profile", "Rank an expert's topics");
    std::string profile_index, profile_expert_label, profile_format = "tsv";
    int profile_top_k = 10;
    profile_cmd->add_option("--index", profile_index, "Index directory")->required();
    profile_cmd->add_option("--expert", profile_expert_label, "Expert label")->required();
    profile_cmd->add_option("--top-k", profile_top_k, "Entries to print")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    profile_cmd->add_option("--format", profile_format, "Output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"tsv", "json"}));

    auto* inspect_cmd = app.add_subcommand("inspect", "Print a matrix or vector from an index");
    std::string inspect_index, inspect_matrix, inspect_vector;
    bool inspect_sparse = false;
    inspect_cmd->add_option("--index", inspect_index, "Index directory")->required();
    inspect_cmd->add_option("--matrix", inspect_matrix,
                            "Matrix name: DTM, DPM, EDM, ETopM, DTopM, RETopM or M");
    inspect_cmd->add_option("--vector", inspect_vector, "Vector name: c_x, c_d or ordering");
    inspect_cmd->add_flag("--sparse", inspect_sparse,
                          "Print the sparse text form instead of a dense grid");

    auto* pipeline_cmd = app.add_subcommand("pipeline", "Run every stage and write the index");
    std::string pipeline_in, pipeline_out, pipeline_format = "auto";
    std::string pipeline_ordering = "interleaved";
    pipeline_cmd->add_option("--in", pipeline_in, "Corpus path")->required();
    pipeline_cmd->add_option("--out", pipeline_out, "Index directory to create")->required();
    pipeline_cmd->add_option("--format", pipeline_format, "Corpus format")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "csv", "json"}));
    pipeline_cmd->add_option("--ordering", pipeline_ordering, "Graph node ordering")
        ->capture_default_str()
        ->check(CLI::IsMember({"interleaved", "docs_first"}));
    ExtractionFlags pipeline_extraction;
    pipeline_extraction.attach(pipeline_cmd);
    CohitsFlags pipeline_cohits;
    pipeline_cohits.attach(pipeline_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "ERROR E_USAGE: " << e.what() << "\n";
        return 2;
    }

    if (*ingest_cmd) {
        Index index;
        index.corpus = ingest(ingest_in, format_from_flag(ingest_format));
        index.config = ExtractionConfig::defaults();
        save_index(ingest_out, index);
    } else if (*extract_cmd) {
        Index index = load_index(extract_index);
        stage_extract(index, extract_flags.config());
        save_index(extract_index, index);
    } else if (*build_cmd) {
        Index index = load_index(build_index);
        stage_build(index, ordering_from_name(build_ordering));
        save_index(build_index, index);
    } else if (*reinforce_cmd) {
        Index index = load_index(reinforce_index);
        stage_reinforce(index, reinforce_flags.params());
        save_index(reinforce_index, index);
        if (reinforce_report) print_report(index.report);
    } else if (*rank_cmd) {
        Index index = load_index(rank_index);
        if (!index.retopm || !index.extraction)
            fail("E_STAGE", "rank requires a reinforced index (run reinforce first)");
        RankedList list = find_experts(rank_query, *index.retopm, index.corpus.experts,
                                       index.extraction->topic_vocab, index.config,
                                       rank_top_k, rank_exact);
        print_ranked(list, rank_format);
    } else if (*profile_cmd) {
        Index index = load_index(profile_index);
        if (!index.retopm || !index.extraction)
            fail("E_STAGE", "profile requires a reinforced index (run reinforce first)");
        RankedList list = profile_expert(profile_expert_label, *index.retopm,
                                         index.corpus.experts, index.extraction->topic_vocab,
                                         profile_top_k);
        print_ranked(list, profile_format);
    } else if (*inspect_cmd) {
        Index index = load_index(inspect_index);
        run_inspect(index, inspect_matrix, inspect_vector, inspect_sparse);
    } else if (*pipeline_cmd) {
        PipelineOptions options;
        options.format = format_from_flag(pipeline_format);
        options.extraction = pipeline_extraction.config();
        options.ordering = ordering_from_name(pipeline_ordering);
        options.cohits = pipeline_cohits.params();
        Index index = run_pipeline(pipeline_in, options);
        save_index(pipeline_out, index);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const usage_error& e) {
        std::cerr << "ERROR E_USAGE: " << e.what() << "\n";
        return 2;
    } catch (const data_error& e) {
        std::cerr << "ERROR " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "ERROR E_INTERNAL: " << e.what() << "\n";
        return 1;
    }
}
