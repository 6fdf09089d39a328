#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvlab/cartoons.hpp"
#include "curvlab/experiments.hpp"
#include "curvlab/report.hpp"
#include "curvlab/transform.hpp"

using curvlab::ExperimentConfig;
using nlohmann::json;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw curvlab::ConfigError("cannot read config file " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw curvlab::ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
}

curvlab::CartoonSpec load_cartoon(const std::optional<std::string>& path) {
    if (!path) return {};
    json doc = load_json(*path);
    try {
        return curvlab::CartoonSpec::from_json(doc.contains("cartoon") ? doc["cartoon"] : doc);
    } catch (const std::exception& e) {
        throw curvlab::ConfigError(std::string("field 'cartoon': ") + e.what());
    }
}

curvlab::FrameParams frame_params(double s, double alpha, int grid) {
    try {
        return curvlab::FrameParams::make(s, alpha, grid);
    } catch (const std::invalid_argument& e) {
        throw curvlab::ConfigError(std::string("frame parameters (s, alpha, grid): ") + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvlab: alpha-curvelet frame experiments"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "List experiments with their acceptance bands");
    bool list_json = false;
    list->add_flag("--json", list_json, "Print the default configuration of every experiment as JSON");

    auto* run = app.add_subcommand("run", "Run one experiment and write its reports");
    std::string name;
    std::optional<std::string> config_path, out_dir;
    std::optional<int> grid;
    std::optional<double> alpha, s;
    std::optional<std::uint64_t> seed;
    run->add_option("experiment", name, "Experiment name (see `list`)")->required();
    run->add_option("--config", config_path, "JSON configuration or a previous report JSON");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--grid", grid, "Samples per axis");
    run->add_option("--alpha", alpha, "Single alpha replacing the default sweep");
    run->add_option("--s", s, "Scale step exponent");
    run->add_option("--seed", seed, "Random seed");

    struct FrameOptions {
        double s = 1.0, alpha = 0.5;
        int grid = 256;
        std::optional<std::string> cartoon;
    };
    auto add_frame_options = [](CLI::App* cmd, FrameOptions& f, bool with_cartoon) {
        cmd->add_option("--s", f.s, "Scale step exponent")->capture_default_str();
        cmd->add_option("--alpha", f.alpha, "Scaling parameter")->capture_default_str();
        cmd->add_option("--grid", f.grid, "Samples per axis")->capture_default_str();
        if (with_cartoon) cmd->add_option("--cartoon", f.cartoon, "JSON cartoon specification (default: disc)");
    };

    auto* layout_cmd = app.add_subcommand("layout", "Print the wedge table of a frame as JSON");
    FrameOptions layout_opt;
    std::optional<std::string> layout_out;
    add_frame_options(layout_cmd, layout_opt, false);
    layout_cmd->add_option("--out", layout_out, "Write to this file instead of standard output");

    auto* render_cmd = app.add_subcommand("render", "Render a cartoon to a PGM image");
    FrameOptions render_opt;
    std::string render_out;
    add_frame_options(render_cmd, render_opt, true);
    render_cmd->add_option("--out", render_out, "Output PGM file")->required();

    auto* coef_cmd = app.add_subcommand("coefficients", "Dump the coefficients of a cartoon");
    FrameOptions coef_opt;
    std::string coef_out;
    std::size_t top_k = 0;
    add_frame_options(coef_cmd, coef_opt, true);
    coef_cmd->add_option("--top", top_k, "Keep only the K largest coefficients (0: all)")->capture_default_str();
    coef_cmd->add_option("--out", coef_out, "Output stem; writes <stem>.json and <stem>.csv")->required();

    CLI11_PARSE(app, argc, argv);

    if (layout_cmd->parsed() || render_cmd->parsed() || coef_cmd->parsed()) {
        try {
            if (layout_cmd->parsed()) {
                auto layout = curvlab::build_layout(frame_params(layout_opt.s, layout_opt.alpha, layout_opt.grid));
                const std::string text = curvlab::layout_to_json(layout).dump(2) + "\n";
                if (layout_out)
                    curvlab::atomic_write(*layout_out, text);
                else
                    std::cout << text;
            } else if (render_cmd->parsed()) {
                if (render_opt.grid < 2) throw curvlab::ConfigError("field 'grid' must be at least 2");
                curvlab::write_pgm(curvlab::render(load_cartoon(render_opt.cartoon), render_opt.grid), render_out);
                std::printf("wrote %s\n", render_out.c_str());
            } else {
                curvlab::DigitalCurveletFrame frame(frame_params(coef_opt.s, coef_opt.alpha, coef_opt.grid));
                auto image = curvlab::render(load_cartoon(coef_opt.cartoon), coef_opt.grid);
                auto paths = curvlab::write_coefficient_dump(frame.analyze(image), coef_out, top_k);
                std::printf("wrote %s\nwrote %s\n", paths.json.c_str(), paths.csv.c_str());
            }
            return 0;
        } catch (const curvlab::ConfigError& e) {
            std::fprintf(stderr, "invalid configuration: %s\n", e.what());
            return 2;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 3;
        }
    }

    if (list->parsed()) {
        if (list_json) {
            std::cout << curvlab::default_config_document().dump(2) << "\n";
            return 0;
        }
        for (const auto& e : curvlab::experiment_catalog())
            std::printf("%-20s %s\n%-20s band: %s\n", e.name.c_str(), e.description.c_str(), "", e.bands.c_str());
        return 0;
    }

    try {
        json doc = config_path ? load_json(*config_path) : json::object();
        if (doc.contains("experiments") && doc["experiments"].is_object()) {
            if (!doc["experiments"].contains(name)) throw curvlab::ConfigError("config file has no entry for " + name);
            doc = json(doc["experiments"][name]);
        }
        json& target = doc.contains("config") && doc["config"].is_object() ? doc["config"] : doc;
        if (grid) target["grid"] = *grid;
        if (alpha) {
            target.erase("alphas");
            target["alpha"] = *alpha;
        }
        if (s) target["s"] = *s;
        if (seed) target["seed"] = *seed;
        ExperimentConfig cfg = ExperimentConfig::resolve(doc, name);
        cfg.out = curvlab::effective_output_dir(cfg, out_dir);

        auto result = curvlab::run_experiment(cfg);
        for (const auto& c : result.checks) std::printf("  %s\n", c.describe().c_str());
        for (const auto& n : result.notes) std::printf("  note: %s\n", n.c_str());
        for (const auto& r : result.reports) std::printf("  wrote %s\n", r.csv.c_str());
        std::printf("%s\n", result.verdict_line().c_str());
        return result.pass ? 0 : 1;
    } catch (const curvlab::ConfigError& e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
