#include "expertrank/pipeline.hpp"

#include "expertrank/errors.hpp"

namespace expertrank {

void stage_extract(Index& index, const ExtractionConfig& config) {
    if (index.corpus.documents.empty()) fail("E_STAGE", "extract requires an ingested corpus");
    index.config = config;
    index.extraction = extract_corpus(index.corpus, config);
    // Everything downstream of extraction is stale now.
    index.dtm.reset();
    index.dpm.reset();
    index.edm.reset();
    index.etopm.reset();
    index.dtopm.reset();
    index.ecg.reset();
    index.ordering.reset();
    index.retopm.reset();
    index.cohits.reset();
    index.report = ReinforceReport{};
}

void stage_build(Index& index, NodeOrdering ordering) {
    if (!index.extraction) fail("E_STAGE", "build requires the extract stage to have run");
    const ExtractionResult& extraction = *index.extraction;

    index.dtm = build_dtm(extraction);
    DfIndex df = build_df_index(extraction);
    index.dpm = build_dpm(extraction, *index.dtm, df);
    index.edm = build_edm(index.corpus);
    index.etopm = build_etopm(*index.edm, *index.dpm);
    index.dtopm = make_dtopm(*index.dpm);
    index.ordering = ordering;
    index.ecg = build_ecg(index.corpus, ordering);

    index.retopm.reset();
    index.cohits.reset();
    index.report = ReinforceReport{};
}

void stage_reinforce(Index& index, const CoHitsParams& params) {
    if (!index.etopm || !index.dtopm || !index.ecg)
        fail("E_STAGE", "reinforce requires the build stage to have run");
    params.validate();
    index.report = ReinforceReport{};
    index.retopm = reinforce(*index.etopm, *index.dtopm, *index.ecg, params, &index.report);
    index.cohits = params;
}

Index run_pipeline(const std::string& corpus_path, const PipelineOptions& options) {
    Index index;
    index.corpus = ingest(corpus_path, options.format);
    stage_extract(index, options.extraction);
    stage_build(index, options.ordering);
    stage_reinforce(index, options.cohits);
    return index;
}

} // namespace expertrank
