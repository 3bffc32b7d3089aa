#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "lenodal/manifest.hpp"

using namespace lenodal;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("manifest_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("sha256 of a known vector") {
    TempDir tmp;
    const fs::path p = tmp.path / "abc.txt";
    std::ofstream(p) << "abc";
    CHECK(sha256_file(p) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("manifest roundtrip and verification") {
    TempDir tmp;
    const fs::path out = tmp.path / "field.bin";
    std::ofstream(out) << "payload bytes";

    RunManifest m;
    m.command = "solve --config x.toml";
    m.config_snapshot = "[problem]\nN = 4\n";
    m.version = "0.1.0";
    m.wall_seconds = 12.5;
    m.outputs.emplace_back("field.bin", sha256_file(out));
    m.checks.emplace_back("converged", true);

    const fs::path mp = tmp.path / "manifest.json";
    save_manifest(m, mp);

    const RunManifest back = load_manifest(mp);
    CHECK(back.command == m.command);
    CHECK(back.config_snapshot == m.config_snapshot);
    CHECK(back.wall_seconds == doctest::Approx(12.5));
    REQUIRE(back.outputs.size() == 1);
    CHECK(back.outputs[0] == m.outputs[0]);
    REQUIRE(back.checks.size() == 1);
    CHECK(back.checks[0].second);

    CHECK(verify_manifest(mp).empty());

    // tampering with a listed output must be detected
    std::ofstream(out) << "different bytes";
    CHECK_FALSE(verify_manifest(mp).empty());

    fs::remove(out);
    CHECK_FALSE(verify_manifest(mp).empty());
}
