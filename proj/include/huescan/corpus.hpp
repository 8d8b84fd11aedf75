#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "huescan/monk.hpp"
#include "huescan/quantize.hpp"
#include "huescan/symbol.hpp"

namespace huescan {

/// Result of analyzing one corpus image. Analysis fields are meaningful only
/// when status == "ok"; error carries the failure detail otherwise.
struct ImageRecord {
    std::string path; // relative to the scan root, '/'-separated
    std::string content_digest;
    int width = 0;
    int height = 0;
    Palette palette;
    SkinFlagReport skin;
    std::map<std::string, SymbolFlag> symbol_flags;
    std::string status; // "ok" | "decode_failed" | "empty"
    std::string error;
};

struct ScanOptions {
    QuantizeConfig quantize;
    MonkScaleConfig monk;
    std::vector<SymbolDbEntry> signatures; // may be empty: no symbol pass
    MatchOptions match;
    int workers = 1;
};

struct CorpusSummary {
    std::size_t n_images = 0;
    std::size_t n_ok = 0;
    std::size_t n_failed = 0;
    std::size_t n_skin_flagged = 0;
    std::map<std::string, std::size_t> symbol_match_counts;
    std::array<double, 12> hue_histogram{}; // 30-degree bins, palette-weighted
    double mean_saturation = 0.0;           // palette-weighted, ok images only
    double mean_value = 0.0;
};

struct ClusterAssignment {
    std::map<std::string, int> group_of;  // ok-image path -> group id
    std::vector<std::string> medoids;     // one exemplar path per group
    int g = 0;
    double total_cost = 0.0; // sum of member-to-medoid palette distances
};

enum class SampleStrategy { Uniform, StratifiedCluster, FlaggedOnly };

/// Parses "uniform" | "stratified-cluster" | "flagged-only". Throws ParseError.
SampleStrategy parse_strategy(const std::string& name);

struct SampleResult {
    std::vector<std::string> paths;
    std::string warning; // non-empty when the flagged pool was smaller than n
};

struct EvalResult {
    std::string task; // "skin" | "symbol"
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;
    std::size_t unmatched = 0; // labeled rows with no usable record
    double error_rate = 0.0;   // (fp + fn) / (tp + fp + tn + fn)
};

/// Recursively scans a directory for supported image files (png, jpg, jpeg,
/// gif, bmp, webp), analyzes each (palette, skin flag, symbol flags), and
/// returns records sorted by path. Per-image failures are recorded in the
/// record status and never abort the batch. Throws DirectoryUnreadable.
std::vector<ImageRecord> scan(const std::filesystem::path& dir, const ScanOptions& options);

/// Analysis of a single already-loaded file; scan() applies this per image.
ImageRecord analyze_image(const std::string& rel_path, const std::vector<std::uint8_t>& bytes,
                          const ScanOptions& options);

CorpusSummary summarize(const std::vector<ImageRecord>& records);

/// PAM-style k-medoids over palette_distance (greedy BUILD, then
/// best-improving SWAP to convergence). The procedure is fully
/// deterministic; seed is accepted for interface stability but unused.
/// Throws TooFewImages when fewer than g records have ok status.
ClusterAssignment cluster_corpus(const std::vector<ImageRecord>& records, int g,
                                 std::uint64_t seed = 0);

/// Draws n distinct paths from the ok records. StratifiedCluster needs an
/// assignment covering the records (proportional quotas, largest-remainder
/// rounding, overfull quotas redistributed). FlaggedOnly restricts the pool
/// to skin- or symbol-flagged records and degrades to the whole pool with a
/// warning when it is smaller than n. Throws SampleTooLarge.
SampleResult sample(const std::vector<ImageRecord>& records, const ClusterAssignment* assignment,
                    std::size_t n, SampleStrategy strategy, std::uint64_t seed);

/// Compares flags against a labeled manifest (CSV: path,task,label). Returns
/// one result per task present in the manifest, sorted by task name. Rows
/// whose path has no ok record are counted as unmatched for their task.
/// Throws ManifestParseError.
std::vector<EvalResult> evaluate(const std::vector<ImageRecord>& records,
                                 const std::string& manifest_csv);

} // namespace huescan
