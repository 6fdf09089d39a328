#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvlab/cartoons.hpp"
#include "curvlab/report.hpp"

namespace curvlab {

// Raised for invalid configurations; the message names the offending field.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ScheduleConfig {
    std::int64_t start = 32;
    double ratio = 1.4142135623730951;
    std::int64_t max = 0;  // 0: a quarter of the coefficient count
};

struct ExperimentConfig {
    std::string experiment;
    double s = 1.0;
    std::vector<double> alphas;
    int grid = 1024;
    std::uint64_t seed = 1;
    std::string out = "results";
    CartoonSpec cartoon;
    ScheduleConfig schedule;
    nlohmann::json options = nlohmann::json::object();  // experiment-specific knobs

    nlohmann::json to_json() const;
    void validate() const;

    // Built-in defaults of one experiment; throws ConfigError for unknown names.
    static ExperimentConfig defaults(const std::string& experiment);
    // Defaults of the named experiment overridden by the keys of doc. A report JSON
    // (configuration under "config") and a defaults document (under "experiments") are accepted as well.
    static ExperimentConfig resolve(const nlohmann::json& doc, const std::string& experiment = "");
};

// The defaults of every experiment, as committed in config/defaults.json.
nlohmann::json default_config_document();

// --out beats the CURVLAB_OUT_DIR environment variable, which beats the configured directory.
std::string effective_output_dir(const ExperimentConfig& cfg, const std::optional<std::string>& cli_out);

struct Check {
    std::string name;
    std::optional<double> alpha;
    double value = 0.0;
    std::optional<double> lo, hi;
    bool pass = false;
    std::string describe() const;
    nlohmann::json to_json() const;
};

struct ExperimentResult {
    std::string experiment;
    bool pass = false;
    std::vector<Check> checks;
    std::vector<ReportPaths> reports;
    std::vector<std::string> notes;  // flags that do not affect the verdict
    nlohmann::json summary;  // contents of the main report JSON
    double seconds = 0.0;

    std::string verdict_line() const;
    const Check* find(const std::string& name, std::optional<double> alpha = std::nullopt) const;
};

struct ExperimentInfo {
    std::string name;
    std::string description;
    std::string bands;
};

const std::vector<ExperimentInfo>& experiment_catalog();

// Runs one experiment and writes its reports into cfg.out.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace curvlab
