#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "huescan/corpus.hpp"
#include "huescan/forensics.hpp"
#include "huescan/monk.hpp"
#include "huescan/quantize.hpp"
#include "huescan/symbol.hpp"

namespace huescan {

// Report format version 1. Field order is fixed (ordered_json) and doubles
// use shortest round-trip formatting, so equal inputs serialize to equal
// bytes — the corpus determinism guarantee depends on this.

nlohmann::ordered_json palette_json(const Palette& palette);
Palette palette_from_json(const nlohmann::json& j);

nlohmann::ordered_json skin_json(const SkinFlagReport& report);
SkinFlagReport skin_from_json(const nlohmann::json& j);

nlohmann::ordered_json match_result_json(const MatchResult& result, bool matched_only);

nlohmann::ordered_json forensics_json(const ForensicsReport& report);

nlohmann::ordered_json record_json(const ImageRecord& record);
ImageRecord record_from_json(const nlohmann::json& j);

/// Scan report: a top-level JSON array of record objects.
nlohmann::ordered_json records_json(const std::vector<ImageRecord>& records);
std::vector<ImageRecord> records_from_json_text(const std::string& text);

nlohmann::ordered_json summary_json(const CorpusSummary& summary);
std::string summary_csv(const CorpusSummary& summary);

nlohmann::ordered_json assignment_json(const ClusterAssignment& assignment);
ClusterAssignment assignment_from_json_text(const std::string& text);

nlohmann::ordered_json eval_json(const std::vector<EvalResult>& results);

/// Canonical dump: 2-space indent plus trailing newline.
std::string dump_json(const nlohmann::ordered_json& j);

} // namespace huescan
