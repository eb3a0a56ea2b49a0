#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dynspec/io.hpp"

using namespace dynspec;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / ("dynspec_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void put(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

// Runs the CLI; stdout and stderr go to files in the scratch directory.
int cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + std::string("\"") + DYNSPEC_CLI_PATH + "\" " + args +
                            " > \"" + (scratch() / "stdout.txt").string() + "\" 2> \"" +
                            (scratch() / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("config text parsing and validation") {
    Config cfg;
    apply_config_text(cfg, "# comment\nd = 21\n[grid]\nalphas = [0.01, 0.02]\nsigma = 1e-5  # trailing\n");
    CHECK(cfg.d == 21);
    CHECK(cfg.alphas.size() == 2);
    CHECK(cfg.sigma == 1e-5);
    CHECK_THROWS_AS(apply_config_text(cfg, "bogus = 1"), ValidationError);

    Config bad;
    bad.d = 14;
    CHECK_THROWS_WITH_AS(validate(bad), "d must be odd", ValidationError);
    bad = Config{};
    bad.m = 4;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = Config{};
    bad.alpha = 1.0;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = Config{};
    bad.K = 151;
    CHECK_THROWS_AS(validate(bad), ValidationError);

    Config noisy;
    noisy.sigma = 1e-3;
    const RecoveryParams p = effective_params(noisy);
    CHECK(p.tol == 1e-8);
    CHECK(p.noise_floor == doctest::Approx(10 * 1e-3 * std::sqrt(5.0)));
    CHECK(effective_params(Config{}).tol == 1e-12);
}

TEST_CASE("json round trips") {
    Config cfg;
    cfg.d = 21;
    cfg.alpha = 0.07;
    cfg.sigma = 1e-7;
    cfg.method = Method::cadzow;
    const Config back = config_from_json(config_to_json(cfg));
    CHECK(back.d == 21);
    CHECK(back.alpha == 0.07);
    CHECK(back.sigma == 1e-7);
    CHECK(back.method == Method::cadzow);

    rmat M(2, 3);
    M << 1, 2, 3, 4, 5, 6;
    const json mj = matrix_to_json(M);
    CHECK(mj["dims"] == json::array({2, 3}));
    CHECK(mj["data"][3] == 4.0);
    CHECK(matrix_from_json(mj) == M);

    const Instance inst = make_instance(Config{}, 17);
    const Instance again = instance_from_json(json::parse(instance_to_json(inst).dump()));
    CHECK(again.ms.corrupted == inst.ms.corrupted);
    CHECK(again.ms.outlier_support == inst.ms.outlier_support);
    CHECK(again.truth.values == inst.truth.values);
    CHECK(instance_to_json(again).dump() == instance_to_json(inst).dump());

    json broken = instance_to_json(inst);
    broken["clean"]["dims"][1] = 7;
    CHECK_THROWS_AS(instance_from_json(broken), ValidationError);
    CHECK_THROWS_AS(instance_from_json(json{{"format_version", 1}}), ValidationError);
}

TEST_CASE("cli simulate") {
    const fs::path a = scratch() / "a.json", b = scratch() / "b.json";
    REQUIRE(cli("simulate --seed 7 --out " + q(a)) == 0);
    REQUIRE(cli("simulate --seed 7 --out " + q(b)) == 0);
    CHECK(slurp(a) == slurp(b));

    const json doc = json::parse(slurp(a));
    CHECK(doc["format_version"] == format_version);
    CHECK(doc["clean"]["dims"] == json::array({5, 300}));
    CHECK(doc["corrupted"]["dims"] == json::array({5, 300}));
    CHECK(doc["outlier_support"].size() == 15);

    const fs::path c = scratch() / "c.json";
    CHECK(cli("simulate --seed 7 --out " + q(c), "DYNSPEC_SEED=8") == 0);
    CHECK(slurp(c) == slurp(a));
    CHECK(cli("simulate --out " + q(c), "DYNSPEC_SEED=7") == 0);
    CHECK(slurp(c) == slurp(a));

    const fs::path cfg = scratch() / "bad.conf";
    put(cfg, "d = 14\n");
    CHECK(cli("simulate --config " + q(cfg) + " --out " + q(scratch() / "x.json")) == 2);
    CHECK(slurp(scratch() / "stderr.txt").find("d must be odd") != std::string::npos);

    CHECK(cli("simulate --seed 1 --out " + q(scratch() / "no_such_dir" / "x.json")) == 3);
    CHECK(cli("simulate --config " + q(scratch() / "missing.conf") + " --out " + q(scratch() / "x.json")) == 3);
    CHECK(cli("simulate --seed nope --out " + q(scratch() / "x.json")) == 2);
}

TEST_CASE("cli recover") {
    const fs::path clean_cfg = scratch() / "clean.conf";
    put(clean_cfg, "alpha = 0\n");
    const fs::path clean = scratch() / "clean.json", corrupt = scratch() / "corrupt.json";
    REQUIRE(cli("simulate --config " + q(clean_cfg) + " --seed 3 --out " + q(clean)) == 0);
    REQUIRE(cli("simulate --seed 3 --out " + q(corrupt)) == 0);

    const fs::path r1 = scratch() / "r1.json";
    REQUIRE(cli("recover --in " + q(clean) + " --method proposed --out " + q(r1)) == 0);
    json res = json::parse(slurp(r1));
    CHECK(res["RE"].get<double>() <= 1e-9);
    CHECK(res["failed"] == false);
    CHECK(res["channels"].size() == 5);

    const fs::path r2 = scratch() / "r2.json";
    REQUIRE(cli("recover --in " + q(corrupt) + " --out " + q(r2)) == 0);
    res = json::parse(slurp(r2));
    CHECK(res["estimated_support"] == res["true_support"]);
    CHECK(res["true_support"].size() == 15);

    const fs::path r3 = scratch() / "r3.json";
    REQUIRE(cli("recover --in " + q(corrupt) + " --method cadzow --out " + q(r3)) == 0);
    res = json::parse(slurp(r3));
    CHECK(res["RE"].get<double>() >= 1e-1);

    const fs::path junk = scratch() / "junk.json";
    put(junk, "{\"format_version\": 1, \"kind\": \"instance\"}");
    CHECK(cli("recover --in " + q(junk) + " --out " + q(scratch() / "r4.json")) == 2);
    put(junk, "not json");
    CHECK(cli("recover --in " + q(junk) + " --out " + q(scratch() / "r4.json")) == 2);
    CHECK(cli("recover --in " + q(corrupt) + " --method svd --out " + q(scratch() / "r4.json")) == 2);
    CHECK(cli("recover --in " + q(scratch() / "absent.json") + " --out " + q(scratch() / "r4.json")) == 3);
}

TEST_CASE("cli sweeps are reproducible") {
    const fs::path cfg = scratch() / "small.conf";
    put(cfg, "d = 15\nL = 60\nalphas = [0.03, 0.05]\ncs = [5]\nsigmas = [1e-3, 1e-7]\n");
    const fs::path a = scratch() / "sa1.csv", b = scratch() / "sa2.csv";
    REQUIRE(cli("sweep-alpha --config " + q(cfg) + " --trials 2 --seed 5 --out " + q(a)) == 0);
    REQUIRE(cli("sweep-alpha --config " + q(cfg) + " --trials 2 --seed 5 --threads 2 --out " + q(b)) == 0);
    CHECK(slurp(a) == slurp(b));
    int lines = 0;
    for (char ch : slurp(a)) lines += ch == '\n';
    CHECK(lines == 1 + 2 * 2 * 2 + 2 * 2);

    const fs::path n = scratch() / "sn.csv", sp = scratch() / "spectra.csv";
    REQUIRE(cli("sweep-noise --config " + q(cfg) + " --trials 1 --out " + q(n) + " --spectra " + q(sp)) == 0);
    CHECK(slurp(n).find(",-1,") != std::string::npos);
    CHECK(!slurp(sp).empty());
    CHECK(cli("sweep-alpha --config " + q(cfg) + " --trials 0 --out " + q(a)) == 2);
}
