#ifndef LENODAL_MANIFEST_HPP
#define LENODAL_MANIFEST_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace lenodal {

std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
    std::string command;
    std::string config_snapshot; // raw config text for provenance
    std::string version;
    double wall_seconds = 0;
    std::vector<std::pair<std::string, std::string>> outputs; // relative path, sha256
    std::vector<std::pair<std::string, bool>> checks;
};

void save_manifest(const RunManifest& m, const std::filesystem::path& path);
RunManifest load_manifest(const std::filesystem::path& path);

/// Re-hashes every listed output relative to the manifest's directory.
/// Returns a list of problems; empty means intact.
std::vector<std::string> verify_manifest(const std::filesystem::path& path);

} // namespace lenodal

#endif
