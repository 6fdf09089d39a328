#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "curvlab/transform.hpp"

namespace curvlab {

// Writes through a temporary file in the same directory and renames it into place.
void atomic_write(const std::string& path, const std::string& content);

// Git blob hash (SHA-1 of "blob <size>\0" + content), lowercase hex.
std::string content_hash(const std::string& content);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string to_csv() const;
};

struct ReportPaths {
    std::string csv, json, plot;
};

// Writes <stem>.csv, <stem>.json and <stem>.gp into out_dir (created if missing).
// The JSON gets the table columns and a content hash of meta["config"] added.
ReportPaths emit_report(const std::string& out_dir, const std::string& stem, const Table& table,
                        nlohmann::json meta, const std::string& plot_script);

// gnuplot script plotting columns y_cols against x_col of <stem>.csv.
std::string loglog_plot_script(const std::string& stem, const Table& table, int x_col,
                               const std::vector<int>& y_cols, bool log_x = true, bool log_y = true);

struct DumpPaths {
    std::string json, csv;
};

// Writes <stem>.json (frame parameters and wedge table) and <stem>.csv with columns
// j, ell, m1, m2, re, im. top_k = 0 dumps every coefficient in flat order; otherwise the
// top_k largest in magnitude order.
DumpPaths write_coefficient_dump(const CoefficientSet& c, const std::string& stem, std::size_t top_k = 0);

}  // namespace curvlab
