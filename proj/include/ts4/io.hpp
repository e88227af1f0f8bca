#pragma once

#include "ts4/core.hpp"
#include "ts4/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ts4::io {

namespace fs = std::filesystem;

/// Shortest text that reads back to the same double (17 significant digits).
std::string format_double(double v);
double parse_double(std::string_view text);

/// Fixed-point text for report tables; never prints "-0".
std::string format_fixed(double v, int decimals);

/// Trials are stored as `<stem>.csv` (header `t,ax,ay,az`, t = sample index)
/// next to `<stem>.meta.json` holding trial_id, subject_id, score and
/// sample_rate_hz (plus provenance for synthetic trials).
inline constexpr std::string_view kTrialHeader = "t,ax,ay,az";
inline constexpr std::string_view kMetaSuffix = ".meta.json";
inline constexpr std::string_view kManifestName = "manifest.json";

fs::path meta_path_for(const fs::path& csv_path);

void write_trial(const fs::path& csv_path, const ScoredTrial& trial,
                 const std::optional<pipeline::Provenance>& provenance = std::nullopt);

struct LoadedTrial {
    ScoredTrial trial;
    std::optional<pipeline::Provenance> provenance;
};

/// Throws Io for unreadable files and Format for malformed content.
LoadedTrial read_trial(const fs::path& csv_path);

/// Every `*.meta.json` in `dir`, ordered by trial_id.
Dataset read_dataset(const fs::path& dir);
void write_dataset(const fs::path& dir, const Dataset& d);

nlohmann::json to_json(const pipeline::AugmentConfig& cfg);
/// Overlays the keys present in `j` on `base`; unknown keys are rejected.
pipeline::AugmentConfig augment_config_from_json(const nlohmann::json& j, pipeline::AugmentConfig base = {});
pipeline::AugmentConfig read_config_file(const fs::path& path, pipeline::AugmentConfig base = {});

nlohmann::json to_json(const pipeline::FoldPlan& plan);

/// Parses "3:1,2:1,1:6,0:12".
std::map<int, std::int64_t> parse_multipliers(std::string_view text);

/// Writes every item plus `manifest.json`; returns the manifest document.
nlohmann::json write_batch(const fs::path& dir, const pipeline::AugmentedBatch& batch, const Dataset& source,
                           const pipeline::AugmentConfig& cfg);

struct LoadedBatch {
    nlohmann::json manifest;
    std::vector<pipeline::BatchItem> items;
};

/// Reads the manifest and every listed trial. Throws Format if a listed file is missing.
LoadedBatch read_batch(const fs::path& dir);

void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

} // namespace ts4::io
