#pragma once

#include <string>

#include "expertrank/persistence.hpp"

namespace expertrank {

struct PipelineOptions {
    CorpusFormat format = CorpusFormat::autodetect;
    ExtractionConfig extraction = ExtractionConfig::defaults();
    NodeOrdering ordering = NodeOrdering::interleaved;
    CoHitsParams cohits;
};

// The full run: ingest -> extract -> build matrices and graph -> reinforce.
// Equivalent to running the stages separately with intermediate saves.
Index run_pipeline(const std::string& corpus_path, const PipelineOptions& options);

// Individual stages, shared by the CLI and the Python bindings. Each checks
// that its inputs are present and clears artifacts it supersedes.
void stage_extract(Index& index, const ExtractionConfig& config);
void stage_build(Index& index, NodeOrdering ordering);
void stage_reinforce(Index& index, const CoHitsParams& params);

} // namespace expertrank
