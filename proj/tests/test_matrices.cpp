#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "expertrank/extractor.hpp"
#include "expertrank/matrices.hpp"
#include "test_util.hpp"

using namespace expertrank;
using testutil::error_code;
using testutil::fixture_path;

namespace {

struct FixtureBundle {
    Corpus corpus;
    ExtractionResult extraction;
    WeightMatrix dtm;
    DfIndex df;
    WeightMatrix dpm;
    WeightMatrix edm;
    WeightMatrix etopm;
};

const FixtureBundle& fixture() {
    static FixtureBundle bundle = [] {
        Corpus corpus = ingest(fixture_path("sample"));
        ExtractionResult extraction = extract_corpus(corpus, ExtractionConfig::defaults());
        WeightMatrix dtm = build_dtm(extraction);
        DfIndex df = build_df_index(extraction);
        WeightMatrix dpm = build_dpm(extraction, dtm, df);
        WeightMatrix edm = build_edm(corpus);
        WeightMatrix etopm = build_etopm(edm, dpm);
        return FixtureBundle{std::move(corpus), std::move(extraction), std::move(dtm),
                             std::move(df),     std::move(dpm),        std::move(edm),
                             std::move(etopm)};
    }();
    return bundle;
}

} // namespace

TEST_SUITE("matrices") {

TEST_CASE("values are canonicalized to nine significant digits") {
    CHECK(canonical_value(0.1 + 0.2) == 0.3);
    CHECK(canonical_value(1.0) == 1.0);
    CHECK(canonical_value(2.5397207708399179) == 2.53972077);

    WeightMatrix m(MatrixRole::DPM, 2, 2);
    m.set(0, 0, 1.0 / 3.0);
    CHECK(m.at(0, 0) == 0.333333333);
}

TEST_CASE("setting zero erases the entry") {
    WeightMatrix m(MatrixRole::DTM, 2, 2);
    m.set(0, 1, 2.0);
    CHECK(m.nnz() == 1);
    m.set(0, 1, 0.0);
    CHECK(m.nnz() == 0);
    CHECK(m.at(0, 1) == 0.0);
}

TEST_CASE("non-finite and out-of-range entries are rejected") {
    WeightMatrix m(MatrixRole::DTM, 2, 2);
    CHECK(error_code([&] { m.set(0, 0, std::nan("")); }) == "E_NUMERIC");
    CHECK(error_code([&] { m.set(5, 0, 1.0); }) == "E_DIM");
    CHECK(error_code([&] { m.set(0, -1, 1.0); }) == "E_DIM");
}

TEST_CASE("role names round trip") {
    CHECK(role_name(MatrixRole::ETopM) == std::string("ETopM"));
    CHECK(role_from_name("etopm") == MatrixRole::ETopM);
    CHECK(role_name(MatrixRole::Adjacency) == std::string("M"));
    CHECK(role_from_name("M") == MatrixRole::Adjacency);
    CHECK(error_code([] { role_from_name("bogus"); }) == "E_FORMAT");
}

TEST_CASE("fixture dtm holds raw token counts") {
    const FixtureBundle& b = fixture();
    int healthcare = b.extraction.token_index("healthcare");
    int analytics = b.extraction.token_index("analytics");
    int health_care = b.extraction.token_index("health-care");
    REQUIRE(healthcare >= 0);
    REQUIRE(analytics >= 0);
    REQUIRE(health_care >= 0);

    CHECK(b.dtm.at(0, healthcare) == 1.0);
    CHECK(b.dtm.at(0, analytics) == 2.0);
    CHECK(b.dtm.at(0, health_care) == 2.0);
    CHECK(b.dtm.at(1, analytics) == 0.0);
}

TEST_CASE("fixture ntf averages constituent counts") {
    const FixtureBundle& b = fixture();
    double value = ntf({"healthcare", "analytics"}, 0, b.dtm, b.extraction);
    CHECK(value == 1.5);  // (1 + 2) / 2, exact
}

TEST_CASE("nidf formula and sign behavior") {
    CHECK(nidf(1, 1, 3) == doctest::Approx(std::log(2.0) + 1.0).epsilon(1e-12));
    CHECK(nidf(1, 1, 3) == doctest::Approx(1.693).epsilon(1e-3));
    CHECK(nidf(1, 5, 3) < 0.0);  // heavy co-occurrence of constituents drives it negative
}

TEST_CASE("fixture dpm weight for the worked phrase") {
    const FixtureBundle& b = fixture();
    int topic = b.extraction.topic_index("healthcare analytics");
    REQUIRE(topic >= 0);
    CHECK(b.dpm.at(0, topic) == doctest::Approx(2.540).epsilon(1e-3));
    CHECK(b.dpm.at(1, topic) == 0.0);
    CHECK(b.dpm.at(2, topic) == 0.0);
}

TEST_CASE("dpm stores weights only where the phrase was extracted") {
    const FixtureBundle& b = fixture();
    b.dpm.for_each([&](int doc, int topic, double value) {
        CHECK(value != 0.0);
        bool found = false;
        for (const std::string& key : b.extraction.doc_topics[doc])
            if (key == b.extraction.topic_vocab[topic]) found = true;
        CHECK(found);
    });
}

TEST_CASE("fixture edm is the authorship indicator") {
    const FixtureBundle& b = fixture();
    CHECK(b.edm.rows() == 3);
    CHECK(b.edm.cols() == 3);
    CHECK(b.edm.nnz() == 5);
    CHECK(b.edm.at(0, 0) == 1.0);  // x1 d1
    CHECK(b.edm.at(1, 0) == 1.0);  // x2 d1
    CHECK(b.edm.at(0, 1) == 1.0);  // x1 d2
    CHECK(b.edm.at(2, 1) == 1.0);  // x3 d2
    CHECK(b.edm.at(1, 2) == 1.0);  // x2 d3
    CHECK(b.edm.at(2, 0) == 0.0);
}

TEST_CASE("fixture etopm column for the worked phrase") {
    const FixtureBundle& b = fixture();
    int topic = b.extraction.topic_index("healthcare analytics");
    std::vector<double> column = b.etopm.column(topic);
    REQUIRE(column.size() == 3);
    CHECK(column[0] == doctest::Approx(2.540).epsilon(1e-3));
    CHECK(column[1] == doctest::Approx(2.540).epsilon(1e-3));
    CHECK(column[2] == 0.0);
}

TEST_CASE("etopm equals the dense product on random instances") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> value(0.0, 2.0);
    std::uniform_int_distribution<int> dim(1, 8);
    std::bernoulli_distribution keep(0.6);

    for (int round = 0; round < 20; ++round) {
        int experts = dim(rng), docs = dim(rng), topics = dim(rng);
        WeightMatrix edm(MatrixRole::EDM, experts, docs);
        WeightMatrix dpm(MatrixRole::DPM, docs, topics);
        for (int x = 0; x < experts; ++x)
            for (int d = 0; d < docs; ++d)
                if (keep(rng)) edm.set(x, d, 1.0);
        for (int d = 0; d < docs; ++d)
            for (int t = 0; t < topics; ++t)
                if (keep(rng)) dpm.set(d, t, value(rng));

        WeightMatrix product = build_etopm(edm, dpm);

        for (int x = 0; x < experts; ++x)
            for (int t = 0; t < topics; ++t) {
                double expected = 0.0;
                for (int d = 0; d < docs; ++d) expected += edm.at(x, d) * dpm.at(d, t);
                CHECK(product.at(x, t) == doctest::Approx(expected).epsilon(1e-7));
            }
    }
}

TEST_CASE("dimension mismatch in the product is rejected") {
    WeightMatrix edm(MatrixRole::EDM, 2, 3);
    WeightMatrix dpm(MatrixRole::DPM, 4, 2);
    CHECK(error_code([&] { build_etopm(edm, dpm); }) == "E_DIM");
}

TEST_CASE("dtopm mirrors dpm under its own role") {
    const FixtureBundle& b = fixture();
    WeightMatrix dtopm = make_dtopm(b.dpm);
    CHECK(dtopm.role() == MatrixRole::DTopM);
    CHECK(dtopm.rows() == b.dpm.rows());
    CHECK(dtopm.cols() == b.dpm.cols());
    CHECK(dtopm.equal(b.dpm, 0.0));
}

TEST_CASE("row and column views are dense") {
    WeightMatrix m(MatrixRole::DTM, 2, 3);
    m.set(0, 2, 5.0);
    m.set(1, 0, 7.0);
    CHECK(m.row(0) == std::vector<double>{0.0, 0.0, 5.0});
    CHECK(m.column(0) == std::vector<double>{0.0, 7.0});
}

TEST_CASE("equal compares with tolerance and structure") {
    WeightMatrix a(MatrixRole::DTM, 2, 2);
    WeightMatrix b(MatrixRole::DTM, 2, 2);
    a.set(0, 0, 1.0);
    b.set(0, 0, 1.0000001);
    CHECK(a.equal(b, 1e-6));
    CHECK_FALSE(a.equal(b, 0.0));
    b.set(1, 1, 1e-13);
    CHECK(a.equal(b, 1e-6));  // near-zero extra entry is within tolerance
}

} // TEST_SUITE
