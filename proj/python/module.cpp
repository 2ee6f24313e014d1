#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "expertrank/cohits.hpp"
#include "expertrank/corpus.hpp"
#include "expertrank/errors.hpp"
#include "expertrank/matrices.hpp"
#include "expertrank/persistence.hpp"
#include "expertrank/pipeline.hpp"
#include "expertrank/ranking.hpp"

namespace py = pybind11;
using namespace expertrank;

namespace {

CorpusFormat format_from_name(const std::string& name) {
    if (name == "auto") return CorpusFormat::autodetect;
    if (name == "csv") return CorpusFormat::csv;
    if (name == "json") return CorpusFormat::json;
    fail("E_USAGE", "unknown corpus format: " + name);
}

// Fetch a matrix slot by its persisted role name; the adjacency matrix is
// materialized from the graph on demand.
WeightMatrix matrix_by_name(const Index& index, const std::string& name) {
    MatrixRole role = role_from_name(name);
    if (role == MatrixRole::Adjacency) {
        if (!index.ecg) fail("E_STATE", "graph not built yet");
        return index.ecg->adjacency();
    }
    const std::optional<WeightMatrix>* slot = nullptr;
    switch (role) {
        case MatrixRole::DTM: slot = &index.dtm; break;
        case MatrixRole::DPM: slot = &index.dpm; break;
        case MatrixRole::EDM: slot = &index.edm; break;
        case MatrixRole::ETopM: slot = &index.etopm; break;
        case MatrixRole::DTopM: slot = &index.dtopm; break;
        case MatrixRole::RETopM: slot = &index.retopm; break;
        case MatrixRole::Adjacency: break;
    }
    if (!slot || !slot->has_value()) fail("E_STATE", "matrix not built yet: " + name);
    return **slot;
}

const ExtractionResult& extraction_of(const Index& index) {
    if (!index.extraction) fail("E_STATE", "extraction has not run yet");
    return *index.extraction;
}

py::dict ranked_to_dict(const RankedList& list) {
    py::list entries;
    for (const auto& entry : list.entries)
        entries.append(py::make_tuple(entry.label, entry.score));
    py::dict out;
    out["entries"] = entries;
    out["fallback_used"] = list.fallback_used;
    out["no_match"] = list.no_match;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Expert finding: n-gram topic weights reinforced over the "
              "document-author graph.";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const data_error& e) {
            PyErr_SetString(PyExc_ValueError, (e.code() + ": " + e.what()).c_str());
        }
    });

    py::class_<Index>(m, "Index")
        .def_property_readonly("experts",
                               [](const Index& i) { return i.corpus.experts; })
        .def_property_readonly("documents",
                               [](const Index& i) {
                                   std::vector<std::string> ids;
                                   for (const auto& d : i.corpus.documents) ids.push_back(d.id);
                                   return ids;
                               })
        .def_property_readonly(
            "token_vocab", [](const Index& i) { return extraction_of(i).token_vocab; })
        .def_property_readonly(
            "topic_vocab", [](const Index& i) { return extraction_of(i).topic_vocab; })
        .def_property_readonly("zero_seed_count",
                               [](const Index& i) { return i.report.zero_seed_count; })
        .def("topic_index",
             [](const Index& i, const std::string& key) {
                 return extraction_of(i).topic_index(key);
             },
             py::arg("key"))
        .def("ntf",
             [](const Index& i, const std::vector<std::string>& lemmas, int doc) {
                 if (!i.dtm) fail("E_STATE", "matrices not built yet");
                 return ntf(lemmas, doc, *i.dtm, extraction_of(i));
             },
             py::arg("lemmas"), py::arg("doc"))
        .def("matrix_shape",
             [](const Index& i, const std::string& name) {
                 WeightMatrix matrix = matrix_by_name(i, name);
                 return py::make_tuple(matrix.rows(), matrix.cols());
             },
             py::arg("name"))
        .def("matrix_entry",
             [](const Index& i, const std::string& name, int row, int col) {
                 return matrix_by_name(i, name).at(row, col);
             },
             py::arg("name"), py::arg("row"), py::arg("col"))
        .def("matrix_column",
             [](const Index& i, const std::string& name, int col) {
                 return matrix_by_name(i, name).column(col);
             },
             py::arg("name"), py::arg("col"))
        .def("rank",
             [](const Index& i, const std::string& query, int top_k, bool exact_only) {
                 if (!i.retopm) fail("E_STAGE", "requires a reinforced index");
                 return ranked_to_dict(find_experts(query, *i.retopm, i.corpus.experts,
                                                    extraction_of(i).topic_vocab, i.config,
                                                    top_k, exact_only));
             },
             py::arg("query"), py::arg("top_k") = 10, py::arg("exact_only") = false)
        .def("profile",
             [](const Index& i, const std::string& expert, int top_k) {
                 if (!i.retopm) fail("E_STAGE", "requires a reinforced index");
                 return ranked_to_dict(profile_expert(expert, *i.retopm, i.corpus.experts,
                                                      extraction_of(i).topic_vocab, top_k));
             },
             py::arg("expert"), py::arg("top_k") = 10);

    m.def(
        "run_pipeline",
        [](const std::string& path, const std::string& format, const std::string& ordering,
           int max_len, const std::string& pattern, double lambda_x, double lambda_d,
           int iterations, const std::string& hub_init, const std::string& authority_init,
           int threads) {
            PipelineOptions options;
            options.format = format_from_name(format);
            options.ordering = ordering_from_name(ordering);
            options.extraction = ExtractionConfig::defaults();
            options.extraction.max_len = max_len;
            if (!pattern.empty()) options.extraction.pattern = pattern;
            options.cohits.lambda_x = lambda_x;
            options.cohits.lambda_d = lambda_d;
            options.cohits.iterations = iterations;
            options.cohits.hub_init = hub_init_from_name(hub_init);
            options.cohits.authority_init = authority_init_from_name(authority_init);
            options.cohits.threads = threads;
            return run_pipeline(path, options);
        },
        py::arg("path"), py::kw_only(), py::arg("format") = "auto",
        py::arg("ordering") = "interleaved", py::arg("max_len") = 3, py::arg("pattern") = "",
        py::arg("lambda_x") = 1.0, py::arg("lambda_d") = 0.7, py::arg("iterations") = 5,
        py::arg("hub_init") = "nvsm", py::arg("authority_init") = "nvsm",
        py::arg("threads") = 1);

    m.def("nidf", &nidf, py::arg("df"), py::arg("conj_df"), py::arg("n_docs"));

    m.def(
        "save_index",
        [](const std::string& directory, const Index& index) { save_index(directory, index); },
        py::arg("directory"), py::arg("index"));

    m.def(
        "load_index", [](const std::string& directory) { return load_index(directory); },
        py::arg("directory"));
}
