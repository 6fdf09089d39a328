#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "curvlab/report.hpp"

using namespace curvlab;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    fs::path d = fs::temp_directory_path() / name;
    fs::remove_all(d);
    return d;
}
}  // namespace

TEST_CASE("content hash matches git blob ids") {
    CHECK(content_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    CHECK(content_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("CSV has a header line and one line per row, with round-trip precision") {
    Table t{{"n", "err2"}, {}};
    for (int i = 0; i < 20; ++i) t.rows.push_back({double(i), 1.0 / 3.0 + i});
    std::string csv = t.to_csv();
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 21);
    CHECK(csv.rfind("n,err2\n", 0) == 0);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    double v = std::stod(line.substr(line.find(',') + 1));
    CHECK(v == 1.0 / 3.0);
}

TEST_CASE("report emission") {
    fs::path dir = scratch("curvlab_report_test") / "nested";
    Table t{{"x", "y"}, {{1, 2}, {2, 4}}};
    nlohmann::json meta = {{"config", {{"grid", 64}}}};
    ReportPaths paths = emit_report(dir.string(), "demo", t, meta, loglog_plot_script("demo", t, 0, {1}));
    CHECK(fs::exists(paths.csv));
    auto j = nlohmann::json::parse(slurp(paths.json));
    CHECK(j["csv"] == "demo.csv");
    CHECK(j["columns"] == nlohmann::json({"x", "y"}));
    CHECK(j["config_hash"] == content_hash(meta["config"].dump()));
    std::string plot = slurp(paths.plot);
    CHECK(plot.find("'demo.csv'") != std::string::npos);
    CHECK(plot.find(dir.string()) == std::string::npos);
    for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().string().find(".tmp.") == std::string::npos);
    // rewriting gives identical bytes
    std::string before = slurp(paths.csv);
    emit_report(dir.string(), "demo", t, meta, "");
    CHECK(slurp(paths.csv) == before);
    fs::remove_all(dir.parent_path());
}

TEST_CASE("unwritable directories are reported by name") {
    fs::path base = scratch("curvlab_report_blocked");
    fs::create_directories(base);
    std::ofstream(base / "file") << "x";
    const std::string target = (base / "file" / "sub").string();
    try {
        emit_report(target, "demo", Table{{"x"}, {{1}}}, {}, "");
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(target) != std::string::npos);
    }
    CHECK_THROWS_AS(atomic_write((base / "missing" / "x.txt").string(), "x"), std::runtime_error);
    fs::remove_all(base);
}

TEST_CASE("coefficient dumps") {
    const fs::path dir = scratch("curvlab_dump_test");
    DigitalCurveletFrame frame(FrameParams::make(1.0, 0.5, 32));
    CoefficientSet c(frame.layout_ptr());
    c.values()[7] = {3.0, -1.0};
    c.values()[2] = 2.0;
    DumpPaths all = write_coefficient_dump(c, (dir / "all").string());
    std::istringstream rows(slurp(all.csv));
    std::string line;
    std::size_t count = 0;
    std::getline(rows, line);
    CHECK(line == "j,ell,m1,m2,re,im");
    while (std::getline(rows, line)) ++count;
    CHECK(count == c.size());

    DumpPaths top = write_coefficient_dump(c, (dir / "top").string(), 2);
    std::istringstream top_rows(slurp(top.csv));
    std::getline(top_rows, line);
    std::string first, second;
    std::getline(top_rows, first);
    std::getline(top_rows, second);
    const CoefficientIndex i7 = c.decode(7);
    const auto& w7 = frame.layout().wedges[i7.wedge];
    CHECK(first == std::to_string(w7.index.j) + "," + std::to_string(w7.index.ell) + "," + std::to_string(i7.m1) + "," +
                       std::to_string(i7.m2) + ",3,-1");
    CHECK(second.substr(second.size() - 4) == ",2,0");
    auto header = nlohmann::json::parse(slurp(top.json));
    CHECK(header["rows"] == 2);
    CHECK(header["wedges"].size() == frame.layout().wedge_count());
    CHECK(header["csv"] == "top.csv");
    fs::remove_all(dir);
}
