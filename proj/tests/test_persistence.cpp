#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "expertrank/persistence.hpp"
#include "expertrank/pipeline.hpp"
#include "test_util.hpp"

using namespace expertrank;
using testutil::error_code;
using testutil::TempDir;

namespace {

Index pipeline_on_sample() {
    PipelineOptions options;
    return run_pipeline(testutil::fixture_path("sample"), options);
}

void check_same_matrix(const std::optional<WeightMatrix>& got,
                       const std::optional<WeightMatrix>& want) {
    REQUIRE(got.has_value() == want.has_value());
    if (want) {
        CHECK(got->equal(*want, 0.0));
        CHECK(got->role() == want->role());
    }
}

std::vector<std::string> sorted_file_names(const std::string& directory) {
    std::vector<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(directory)) {
        names.push_back(entry.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

} // namespace

TEST_SUITE("persistence") {

TEST_CASE("fnv1a64 matches the published vectors") {
    CHECK(fnv1a64("") == UINT64_C(0xcbf29ce484222325));
    CHECK(fnv1a64("a") == UINT64_C(0xaf63dc4c8601ec8c));
    CHECK(fnv1a64("foobar") == UINT64_C(0x85944171f73967e8));
    CHECK(checksum_string("") == "fnv1a64:cbf29ce484222325");
    CHECK(checksum_string("a") == "fnv1a64:af63dc4c8601ec8c");
}

TEST_CASE("format_double renders nine significant digits") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(2.5397207708399179) == "2.53972077");
    CHECK(format_double(1.0 / 3.0) == "0.333333333");
    CHECK(format_double(1e-12) == "1e-12");
    CHECK(format_double(-1.6931471805599454) == "-1.69314718");
    CHECK(error_code([] { format_double(std::nan("")); }) == "E_NUMERIC");
}

TEST_CASE("parse_double round-trips and rejects junk") {
    for (double v : {0.5, -3.25, 1e-12, 0.333333333, 123456789.0}) {
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(error_code([] { parse_double("not-a-number"); }) == "E_FORMAT");
    CHECK(error_code([] { parse_double("1.5x"); }) == "E_FORMAT");
    CHECK(error_code([] { parse_double(""); }) == "E_FORMAT");
}

TEST_CASE("matrix text round-trips exactly") {
    WeightMatrix m(MatrixRole::DPM, 3, 4);
    m.set(0, 1, 2.5397207708399179);
    m.set(2, 3, -0.125);
    m.set(1, 0, 1.0 / 3.0);

    std::string text = matrix_to_text(m);
    CHECK(text.rfind("DPM 3 4 3\n", 0) == 0);

    WeightMatrix back = matrix_from_text(text, "test");
    CHECK(back.equal(m, 0.0));
    CHECK(back.role() == MatrixRole::DPM);
    CHECK(back.rows() == 3);
    CHECK(back.cols() == 4);
}

TEST_CASE("matrix text rejects malformed input") {
    CHECK(error_code([] { matrix_from_text("", "t"); }) == "E_FORMAT");
    CHECK(error_code([] { matrix_from_text("DPM 2 2\n", "t"); }) == "E_FORMAT");
    CHECK(error_code([] { matrix_from_text("BOGUS 2 2 0\n", "t"); }) == "E_FORMAT");
    // Declared one entry, provided none.
    CHECK(error_code([] { matrix_from_text("DPM 2 2 1\n", "t"); }) == "E_FORMAT");
    // Declared none, provided one.
    CHECK(error_code([] { matrix_from_text("DPM 2 2 0\n0 0 1.5\n", "t"); }) == "E_FORMAT");
    CHECK(error_code([] { matrix_from_text("DPM 2 2 1\n0 0 x\n", "t"); }) == "E_FORMAT");
    CHECK(error_code([] { matrix_from_text("DPM 2 2 1\n5 0 1.0\n", "t"); }) == "E_DIM");
}

TEST_CASE("matrix files round-trip through disk") {
    TempDir dir;
    WeightMatrix m(MatrixRole::ETopM, 2, 2);
    m.set(0, 0, 1.5);
    save_matrix(m, dir.file("m.mat"));
    WeightMatrix back = load_matrix(dir.file("m.mat"));
    CHECK(back.equal(m, 0.0));
    CHECK(error_code([&] { load_matrix(dir.file("absent.mat")); }) == "E_IO");
}

TEST_CASE("a full index survives save and load") {
    Index built = pipeline_on_sample();
    TempDir dir;
    save_index(dir.str(), built);
    Index loaded = load_index(dir.str());

    CHECK(loaded.corpus.experts == built.corpus.experts);
    REQUIRE(loaded.corpus.documents.size() == built.corpus.documents.size());
    for (std::size_t i = 0; i < built.corpus.documents.size(); ++i) {
        CHECK(loaded.corpus.documents[i].id == built.corpus.documents[i].id);
        CHECK(loaded.corpus.documents[i].text == built.corpus.documents[i].text);
    }
    CHECK(loaded.corpus.authorship == built.corpus.authorship);
    CHECK(loaded.corpus.expert_index("x2") == 1);

    CHECK(loaded.config.max_len == built.config.max_len);
    CHECK(loaded.config.pattern == built.config.pattern);
    CHECK(loaded.config.stopwords == built.config.stopwords);
    CHECK(loaded.config.lexicon == built.config.lexicon);

    REQUIRE(loaded.extraction.has_value());
    CHECK(loaded.extraction->doc_tokens == built.extraction->doc_tokens);
    CHECK(loaded.extraction->doc_topics == built.extraction->doc_topics);
    CHECK(loaded.extraction->token_vocab == built.extraction->token_vocab);
    CHECK(loaded.extraction->topic_vocab == built.extraction->topic_vocab);

    REQUIRE(loaded.ecg.has_value());
    CHECK(loaded.ecg->node_labels == built.ecg->node_labels);
    CHECK(loaded.ecg->node_is_doc == built.ecg->node_is_doc);
    CHECK(loaded.ecg->edges == built.ecg->edges);
    CHECK(loaded.ecg->c_x == built.ecg->c_x);
    CHECK(loaded.ecg->c_d == built.ecg->c_d);
    CHECK(loaded.ecg->adjacency().equal(built.ecg->adjacency(), 0.0));
    CHECK(loaded.ordering == built.ordering);

    check_same_matrix(loaded.dtm, built.dtm);
    check_same_matrix(loaded.dpm, built.dpm);
    check_same_matrix(loaded.edm, built.edm);
    check_same_matrix(loaded.etopm, built.etopm);
    check_same_matrix(loaded.dtopm, built.dtopm);
    check_same_matrix(loaded.retopm, built.retopm);

    REQUIRE(loaded.cohits.has_value());
    CHECK(loaded.cohits->lambda_x == built.cohits->lambda_x);
    CHECK(loaded.cohits->lambda_d == built.cohits->lambda_d);
    CHECK(loaded.cohits->iterations == built.cohits->iterations);
    CHECK(loaded.cohits->hub_init == built.cohits->hub_init);
    CHECK(loaded.cohits->authority_init == built.cohits->authority_init);

    REQUIRE(loaded.report.topics.size() == built.report.topics.size());
    CHECK(loaded.report.zero_seed_count == built.report.zero_seed_count);
}

TEST_CASE("a partial index persists only what exists") {
    Index index;
    index.corpus = ingest(testutil::fixture_path("sample"), CorpusFormat::csv);
    index.config = ExtractionConfig::defaults();

    TempDir dir;
    save_index(dir.str(), index);
    Index loaded = load_index(dir.str());
    CHECK(loaded.corpus.experts == index.corpus.experts);
    CHECK_FALSE(loaded.extraction.has_value());
    CHECK_FALSE(loaded.ecg.has_value());
    CHECK_FALSE(loaded.retopm.has_value());
    CHECK_FALSE(loaded.cohits.has_value());

    stage_extract(loaded, loaded.config);
    TempDir dir2;
    save_index(dir2.str(), loaded);
    Index loaded2 = load_index(dir2.str());
    CHECK(loaded2.extraction.has_value());
    CHECK_FALSE(loaded2.dtm.has_value());
    CHECK_FALSE(loaded2.ecg.has_value());
}

TEST_CASE("saving is deterministic byte for byte") {
    Index built = pipeline_on_sample();
    TempDir first;
    TempDir second;
    save_index(first.str(), built);
    Index loaded = load_index(first.str());
    save_index(second.str(), loaded);

    auto names = sorted_file_names(first.str());
    CHECK(names == sorted_file_names(second.str()));
    for (const auto& name : names) {
        INFO("file ", name);
        CHECK(read_file(first.file(name)) == read_file(second.file(name)));
    }
}

TEST_CASE("the manifest inventory matches the files on disk") {
    Index built = pipeline_on_sample();
    TempDir dir;
    save_index(dir.str(), built);

    auto manifest = nlohmann::json::parse(read_file(dir.file("manifest.json")));
    CHECK(manifest.at("format_version").get<int>() == 1);
    const auto& files = manifest.at("files");
    CHECK(files.contains("etopm.mat"));
    CHECK(files.contains("retopm.mat"));
    CHECK(files.contains("corpus.json"));
    for (auto it = files.begin(); it != files.end(); ++it) {
        INFO("file ", it.key());
        CHECK(it.value().get<std::string>() == checksum_string(read_file(dir.file(it.key()))));
    }
    // The manifest lists every artifact in the directory except itself.
    CHECK(files.size() + 1 == sorted_file_names(dir.str()).size());
}

TEST_CASE("corruption is caught and the file is named") {
    Index built = pipeline_on_sample();
    TempDir dir;
    save_index(dir.str(), built);

    std::string bytes = read_file(dir.file("etopm.mat"));
    bytes[bytes.size() / 2] ^= 0x01;
    write_file_atomic(dir.file("etopm.mat"), bytes);

    try {
        load_index(dir.str());
        FAIL("expected E_CHECKSUM");
    } catch (const data_error& e) {
        CHECK(std::string(e.code()) == "E_CHECKSUM");
        CHECK(std::string(e.what()).find("etopm.mat") != std::string::npos);
    }
}

TEST_CASE("unknown manifest versions are refused") {
    Index built = pipeline_on_sample();
    TempDir dir;
    save_index(dir.str(), built);

    auto manifest = nlohmann::json::parse(read_file(dir.file("manifest.json")));
    manifest["format_version"] = 2;
    write_file_atomic(dir.file("manifest.json"), manifest.dump(2) + "\n");
    CHECK(error_code([&] { load_index(dir.str()); }) == "E_VERSION");

    manifest.erase("format_version");
    write_file_atomic(dir.file("manifest.json"), manifest.dump(2) + "\n");
    CHECK(error_code([&] { load_index(dir.str()); }) == "E_FORMAT");
}

TEST_CASE("a missing artifact is an io error") {
    Index built = pipeline_on_sample();
    TempDir dir;
    save_index(dir.str(), built);
    std::filesystem::remove(dir.file("dtm.mat"));
    CHECK(error_code([&] { load_index(dir.str()); }) == "E_IO");
}

TEST_CASE("a missing manifest is an io error") {
    TempDir dir;
    CHECK(error_code([&] { load_index(dir.str()); }) == "E_IO");
}

TEST_CASE("staged runs with intermediate saves match the single pass") {
    Index direct = pipeline_on_sample();
    TempDir direct_dir;
    save_index(direct_dir.str(), direct);

    // The same work, reloading from disk between every stage.
    TempDir staged_dir;
    {
        Index index;
        index.corpus = ingest(testutil::fixture_path("sample"), CorpusFormat::autodetect);
        index.config = ExtractionConfig::defaults();
        save_index(staged_dir.str(), index);
    }
    {
        Index index = load_index(staged_dir.str());
        stage_extract(index, ExtractionConfig::defaults());
        save_index(staged_dir.str(), index);
    }
    {
        Index index = load_index(staged_dir.str());
        stage_build(index, NodeOrdering::interleaved);
        save_index(staged_dir.str(), index);
    }
    {
        Index index = load_index(staged_dir.str());
        stage_reinforce(index, CoHitsParams{});
        save_index(staged_dir.str(), index);
    }

    auto names = sorted_file_names(direct_dir.str());
    CHECK(names == sorted_file_names(staged_dir.str()));
    for (const auto& name : names) {
        INFO("file ", name);
        CHECK(read_file(direct_dir.file(name)) == read_file(staged_dir.file(name)));
    }
}

TEST_CASE("stages demand their inputs") {
    Index empty;
    empty.corpus = ingest(testutil::fixture_path("sample"), CorpusFormat::csv);
    CHECK(error_code([&] { stage_build(empty, NodeOrdering::interleaved); }) == "E_STAGE");
    CHECK(error_code([&] { stage_reinforce(empty, CoHitsParams{}); }) == "E_STAGE");
}

TEST_CASE("rebuilding clears stale downstream artifacts") {
    Index index = pipeline_on_sample();
    REQUIRE(index.retopm.has_value());
    stage_extract(index, index.config);
    CHECK_FALSE(index.dtm.has_value());
    CHECK_FALSE(index.retopm.has_value());
    CHECK_FALSE(index.cohits.has_value());
    CHECK(index.report.topics.empty());

    stage_build(index, NodeOrdering::interleaved);
    CHECK(index.etopm.has_value());
    CHECK_FALSE(index.retopm.has_value());
}

} // TEST_SUITE
