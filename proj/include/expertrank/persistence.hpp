#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "expertrank/cohits.hpp"
#include "expertrank/corpus.hpp"
#include "expertrank/ecg.hpp"
#include "expertrank/extractor.hpp"
#include "expertrank/matrices.hpp"

namespace expertrank {

// Everything a query needs, as produced stage by stage. Optional members are
// absent until their stage has run; save_index persists exactly what is
// present and load_index restores it.
struct Index {
    Corpus corpus;
    ExtractionConfig config;
    std::optional<ExtractionResult> extraction;
    std::optional<NodeOrdering> ordering;
    std::optional<Ecg> ecg;
    std::optional<WeightMatrix> dtm;
    std::optional<WeightMatrix> dpm;
    std::optional<WeightMatrix> edm;
    std::optional<WeightMatrix> etopm;
    std::optional<WeightMatrix> dtopm;
    std::optional<WeightMatrix> retopm;
    std::optional<CoHitsParams> cohits;
    ReinforceReport report;
};

// FNV-1a 64-bit, used for every file checksum and the corpus fingerprint.
std::uint64_t fnv1a64(std::string_view bytes);
std::string checksum_string(std::string_view bytes);  // "fnv1a64:<16 hex digits>"

// Locale-independent %.9g rendering used by every persisted real value.
std::string format_double(double value);
double parse_double(const std::string& text);

std::string matrix_to_text(const WeightMatrix& matrix);
WeightMatrix matrix_from_text(const std::string& text, const std::string& origin);

void save_matrix(const WeightMatrix& matrix, const std::string& path);
WeightMatrix load_matrix(const std::string& path);

// Writes manifest.json plus one file per artifact, each written to a
// temporary name and atomically renamed, manifest last. Re-saving identical
// inputs produces byte-identical files (no timestamps, sorted keys).
void save_index(const std::string& directory, const Index& index);

// Verifies the manifest version and every file checksum before parsing;
// checksum failures name the offending file.
Index load_index(const std::string& directory);

std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace expertrank
