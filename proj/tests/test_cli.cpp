#include "cli.hpp"
#include "hodgecover/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using hodgecover::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = hodgecover::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::vector<std::string> small(const fs::path& out, std::vector<std::string> extra) {
    std::vector<std::string> a{"--out", out.string(), "--n", "8", "--clusters", "2", "--layers", "2",
                               "--corpus-size", "256", "--threads", "2"};
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
}

}  // namespace

TEST_CASE("synth output is byte-identical across runs") {
    TempDir a("hc_cli_a"), b("hc_cli_b");
    REQUIRE(invoke(small(a.path, {"synth"})).code == 0);
    REQUIRE(invoke(small(b.path, {"synth"})).code == 0);
    for (const char* f : {"layer_00.json", "layer_01.json"})
        CHECK(slurp(a.path / "model" / f) == slurp(b.path / "model" / f));
}

TEST_CASE("compress at rate zero costs nothing") {
    TempDir d("hc_cli_rate0");
    REQUIRE(invoke(small(d.path, {"synth"})).code == 0);
    const auto r = invoke(small(d.path, {"--rate", "0", "compress"}));
    REQUIRE(r.code == 0);
    const auto summary = hodgecover::read_json_file(d.path / "compress_hodgecover.json");
    CHECK(summary.at("mean_loss").get<double>() == 0.0);
}

TEST_CASE("hybrid compression writes masks and records r2") {
    TempDir d("hc_cli_hybrid");
    REQUIRE(invoke(small(d.path, {"synth"})).code == 0);
    REQUIRE(invoke(small(d.path, {"compress", "--hybrid"})).code == 0);
    CHECK(fs::exists(d.path / "masks" / "hodgecover_hybrid" / "layer_00.json"));
    const auto summary = hodgecover::read_json_file(d.path / "compress_hodgecover_hybrid.json");
    CHECK(summary.at("r2").get<double>() == doctest::Approx(0.575));
}

TEST_CASE("diagnose and report") {
    TempDir d("hc_cli_diag");
    REQUIRE(invoke(small(d.path, {"synth"})).code == 0);
    REQUIRE(invoke(small(d.path, {"diagnose"})).code == 0);
    const auto csv = slurp(d.path / "diagnostics.csv");
    CHECK(csv.rfind("layer,rho_harm,rho_grad,rho_curl,delta,beta1", 0) == 0);
    CHECK(fs::exists(d.path / "betti" / "layer_01.csv"));
    REQUIRE(invoke(small(d.path, {"report"})).code == 0);
    CHECK(slurp(d.path / "report.md").find("rho_harm") != std::string::npos);
}

TEST_CASE("manifest records the config hash") {
    TempDir d("hc_cli_manifest");
    REQUIRE(invoke(small(d.path, {"synth"})).code == 0);
    const auto m = hodgecover::read_json_file(d.path / "manifest.json");
    CHECK(m.at("config_hash").get<std::string>() == hodgecover::config_hash(m.at("config")));
    CHECK(m.at("artifacts").contains("synth"));
}

TEST_CASE("usage errors exit with 1") {
    TempDir d("hc_cli_usage");
    CHECK(invoke(small(d.path, {"--method", "bogus", "compress"})).code == 1);
    CHECK(invoke({"--rate"}).code == 1);
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"nonsense"}).code == 1);
}

TEST_CASE("data errors exit with 2") {
    TempDir d("hc_cli_data");
    REQUIRE(invoke(small(d.path, {"synth"})).code == 0);
    std::ofstream(d.path / "model" / "layer_00.json") << "{\"n\": 3}";
    const auto r = invoke(small(d.path, {"barriers"}));
    CHECK(r.code == 2);
    CHECK(r.err.find("error:") != std::string::npos);
    CHECK(invoke(small(d.path, {"--config", (d.path / "absent.json").string(), "synth"})).code == 2);
    CHECK(invoke(small(d.path, {"--rate", "0.99", "compress"})).code == 2);
}

TEST_CASE("version flag") {
    const auto r = invoke({"--version"});
    CHECK(r.code == 0);
    CHECK(r.out.find("0.1.0") != std::string::npos);
}
