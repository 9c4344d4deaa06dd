#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace specgr::cli {

namespace fs = std::filesystem;

std::string sha256_file(const fs::path& path);
std::string sha256_text(const std::string& text);

// Short hash of a stage configuration (canonical JSON dump).
std::string config_hash(const nlohmann::json& config);

fs::path manifest_path(const fs::path& artifact);

struct ManifestInfo {
  std::string command;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
  double duration_ms = 0.0;
};

// Writes `<output>.manifest.json` next to every output.
void write_manifests(const ManifestInfo& info);

// Throws UsageError naming `producer` when the artifact is missing, and
// FormatError when its manifest is missing or records a different config
// hash (unless `force`).
void check_artifact(const fs::path& artifact, const std::string& producer, const nlohmann::json& expected_config,
                    bool force);

}  // namespace specgr::cli
