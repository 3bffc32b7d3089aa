#include "lenodal/manifest.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

namespace lenodal {

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string() + " for hashing");
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw std::runtime_error("hash context allocation failed");
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (is) {
        is.read(buf, sizeof buf);
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(is.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

void save_manifest(const RunManifest& m, const std::filesystem::path& path) {
    nlohmann::json j;
    j["command"] = m.command;
    j["config_snapshot"] = m.config_snapshot;
    j["version"] = m.version;
    j["wall_seconds"] = m.wall_seconds;
    j["outputs"] = nlohmann::json::object();
    for (const auto& [file, hash] : m.outputs) j["outputs"][file] = hash;
    j["checks"] = nlohmann::json::object();
    for (const auto& [name, ok] : m.checks) j["checks"][name] = ok;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << j.dump(2) << "\n";
}

RunManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    nlohmann::json j;
    is >> j;
    RunManifest m;
    m.command = j.value("command", "");
    m.config_snapshot = j.value("config_snapshot", "");
    m.version = j.value("version", "");
    m.wall_seconds = j.value("wall_seconds", 0.0);
    if (j.contains("outputs"))
        for (const auto& [file, hash] : j["outputs"].items())
            m.outputs.emplace_back(file, hash.get<std::string>());
    if (j.contains("checks"))
        for (const auto& [name, ok] : j["checks"].items()) m.checks.emplace_back(name, ok.get<bool>());
    return m;
}

std::vector<std::string> verify_manifest(const std::filesystem::path& path) {
    std::vector<std::string> problems;
    RunManifest m;
    try {
        m = load_manifest(path);
    } catch (const std::exception& ex) {
        problems.emplace_back(ex.what());
        return problems;
    }
    const std::filesystem::path dir = path.parent_path();
    for (const auto& [file, hash] : m.outputs) {
        const std::filesystem::path target = dir / file;
        if (!std::filesystem::exists(target)) {
            problems.push_back("missing output: " + file);
            continue;
        }
        if (sha256_file(target) != hash) problems.push_back("hash mismatch: " + file);
    }
    return problems;
}

} // namespace lenodal
