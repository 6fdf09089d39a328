#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "curvlab/experiments.hpp"

using namespace curvlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string error_of(const json& doc, const std::string& name) {
    try {
        ExperimentConfig::resolve(doc, name);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

ExperimentConfig quick_generator(const fs::path& out) {
    ExperimentConfig c = ExperimentConfig::resolve(
        {{"grid", 64}, {"alphas", {0.5}}, {"options", {{"step", 0.01}}}, {"out", out.string()}}, "generator-decay");
    return c;
}
}  // namespace

TEST_CASE("committed defaults equal the built-in defaults") {
    std::ifstream in(std::string(CURVLAB_SOURCE_DIR) + "/config/defaults.json");
    REQUIRE(in);
    CHECK(json::parse(in) == default_config_document());
}

TEST_CASE("catalog, defaults and runners cover the same experiments") {
    std::set<std::string> names;
    for (const auto& e : experiment_catalog()) {
        names.insert(e.name);
        CHECK_NOTHROW(ExperimentConfig::defaults(e.name).validate());
        CHECK(!e.bands.empty());
    }
    CHECK(names.size() == 9);
    CHECK(default_config_document()["experiments"].size() == 9);
}

TEST_CASE("invalid configurations name the failing field") {
    CHECK(error_of({}, "no-such") .find("no-such") != std::string::npos);
    CHECK(error_of({{"gird", 64}}, "disc-rate").find("'gird'") != std::string::npos);
    CHECK(error_of({{"grid", 63}}, "disc-rate").find("'grid'") != std::string::npos);
    CHECK(error_of({{"grid", "big"}}, "disc-rate").find("'grid'") != std::string::npos);
    CHECK(error_of({{"alphas", {1.5}}}, "disc-rate").find("'alphas'") != std::string::npos);
    CHECK(error_of({{"schedule", {{"ratio", 1.0}}}}, "disc-rate").find("'schedule.ratio'") != std::string::npos);
    CHECK(error_of({{"schedule", {{"step", 1}}}}, "disc-rate").find("'schedule.step'") != std::string::npos);
    CHECK(error_of({{"options", {{"nope", 1}}}}, "bessel-check").find("'options.nope'") != std::string::npos);
    CHECK(error_of({{"options", {{"radii", 3}}}}, "molecule-distance").find("'options.radii'") != std::string::npos);
    CHECK(error_of({{"cartoon", {{"colour", 1}}}}, "disc-rate").find("'cartoon.colour'") != std::string::npos);
    CHECK(error_of({{"experiment", "disc-rate"}}, "bessel-check").find("'experiment'") != std::string::npos);
    CHECK(error_of({}, "").find("'experiment'") != std::string::npos);
}

TEST_CASE("overrides merge onto defaults") {
    ExperimentConfig c = ExperimentConfig::resolve({{"alpha", 0.25}, {"cartoon", {{"radius", 0.3}}}}, "disc-rate");
    CHECK(c.alphas == std::vector<double>{0.25});
    CHECK(c.cartoon.radius == 0.3);
    CHECK(c.grid == 1024);
    CHECK(c.schedule.start == 32);
    ExperimentConfig d = ExperimentConfig::resolve(default_config_document(), "apriori-decay");
    CHECK(d.to_json() == ExperimentConfig::defaults("apriori-decay").to_json());
}

TEST_CASE("output directory precedence") {
    ExperimentConfig c = ExperimentConfig::defaults("bessel-check");
    c.out = "from-config";
    ::unsetenv("CURVLAB_OUT_DIR");
    CHECK(effective_output_dir(c, std::nullopt) == "from-config");
    ::setenv("CURVLAB_OUT_DIR", "from-env", 1);
    CHECK(effective_output_dir(c, std::nullopt) == "from-env");
    CHECK(effective_output_dir(c, std::string("from-cli")) == "from-cli");
    ::unsetenv("CURVLAB_OUT_DIR");
}

TEST_CASE("reports are deterministic and self-describing") {
    fs::path base = fs::temp_directory_path() / "curvlab_experiment_test";
    fs::remove_all(base);
    ExperimentConfig c = quick_generator(base / "a");
    ExperimentResult r1 = run_experiment(c);
    CHECK(r1.pass);
    REQUIRE(r1.reports.size() == 1);
    json report = json::parse(slurp(r1.reports[0].json));
    CHECK(report["verdict"] == "PASS");
    CHECK(report["config_hash"].is_string());

    // the report alone reproduces the run
    ExperimentConfig again = ExperimentConfig::resolve(report);
    CHECK(again.to_json() == c.to_json());
    again.out = (base / "b").string();
    ExperimentResult r2 = run_experiment(again);
    CHECK(slurp(r1.reports[0].csv) == slurp(r2.reports[0].csv));
    CHECK(r1.verdict_line().rfind("PASS generator-decay", 0) == 0);
    fs::remove_all(base);
}

TEST_CASE("seeded experiments are reproducible") {
    fs::path base = fs::temp_directory_path() / "curvlab_seed_test";
    fs::remove_all(base);
    json doc = {{"grid", 32},
                {"alphas", {0.5}},
                {"options", {{"partition_grid", 32}, {"oracle_grid", 16}, {"trials", 2}}},
                {"seed", 11}};
    doc["out"] = (base / "a").string();
    auto a = run_experiment(ExperimentConfig::resolve(doc, "verify-frame"));
    doc["out"] = (base / "b").string();
    auto b = run_experiment(ExperimentConfig::resolve(doc, "verify-frame"));
    CHECK(a.pass);
    CHECK(slurp(a.reports[0].csv) == slurp(b.reports[0].csv));
    fs::remove_all(base);
}

TEST_CASE("the verdict follows the checks") {
    fs::path base = fs::temp_directory_path() / "curvlab_fail_test";
    fs::remove_all(base);
    json doc = {{"grid", 64}, {"alphas", {0.5}}, {"schedule", {{"start", 4}}}, {"out", base.string()}};
    ExperimentResult r = run_experiment(ExperimentConfig::resolve(doc, "disc-rate"));
    REQUIRE(r.checks.size() == 1);
    CHECK(r.pass == r.checks[0].pass);
    CHECK(r.verdict_line().rfind(r.pass ? "PASS" : "FAIL", 0) == 0);
    CHECK(r.find("thresholding_slope", 0.5) != nullptr);
    fs::remove_all(base);
}

TEST_CASE("alphas outside the validated range are flagged, not rejected") {
    ExperimentConfig cfg = ExperimentConfig::defaults("generator-decay");
    cfg.alphas = {0.5, 1.0};
    cfg.out = (std::filesystem::temp_directory_path() / "curvlab_alpha_flag").string();
    ExperimentResult r = run_experiment(cfg);
    REQUIRE(r.notes.size() == 1);
    CHECK(r.notes[0].find("alpha=1") != std::string::npos);
    CHECK(r.summary["notes"].size() == 1);
    std::filesystem::remove_all(cfg.out);
}
