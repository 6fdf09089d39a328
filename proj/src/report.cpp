#include "curvlab/report.hpp"

#include <cstdio>
#include <filesystem>
#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>
#include <unistd.h>

namespace curvlab {

namespace fs = std::filesystem;

void atomic_write(const std::string& path, const std::string& content) {
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write to directory " + target.parent_path().string());
        out.write(content.data(), std::streamsize(content.size()));
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move " + tmp.string() + " to " + target.string() + ": " + ec.message());
    }
}

std::string content_hash(const std::string& content) {
    const std::string blob = "blob " + std::to_string(content.size()) + std::string(1, '\0') + content;
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr))
        throw std::runtime_error("sha1 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
    out += "\n";
    char buf[64];
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", row[c]);
            out += (c ? "," : "");
            out += buf;
        }
        out += "\n";
    }
    return out;
}

ReportPaths emit_report(const std::string& out_dir, const std::string& stem, const Table& table,
                        nlohmann::json meta, const std::string& plot_script) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) throw std::runtime_error("cannot create output directory " + out_dir);
    ReportPaths paths{(fs::path(out_dir) / (stem + ".csv")).string(), (fs::path(out_dir) / (stem + ".json")).string(),
                      (fs::path(out_dir) / (stem + ".gp")).string()};
    meta["columns"] = table.columns;
    meta["csv"] = stem + ".csv";
    if (meta.contains("config")) meta["config_hash"] = content_hash(meta["config"].dump());
    atomic_write(paths.csv, table.to_csv());
    atomic_write(paths.json, meta.dump(2) + "\n");
    atomic_write(paths.plot, plot_script);
    return paths;
}

std::string loglog_plot_script(const std::string& stem, const Table& table, int x_col,
                               const std::vector<int>& y_cols, bool log_x, bool log_y) {
    std::string s = "set datafile separator ','\nset key autotitle columnhead\n";
    if (log_x) s += "set logscale x\n";
    if (log_y) s += "set logscale y\n";
    s += "set xlabel '" + table.columns.at(x_col) + "'\n";
    s += "set terminal pngcairo size 900,600\nset output '" + stem + ".png'\n";
    s += "plot ";
    for (std::size_t i = 0; i < y_cols.size(); ++i) {
        if (i) s += ", ";
        s += "'" + stem + ".csv' using " + std::to_string(x_col + 1) + ":" + std::to_string(y_cols[i] + 1) +
             " with linespoints";
    }
    s += "\n";
    return s;
}

DumpPaths write_coefficient_dump(const CoefficientSet& c, const std::string& stem, std::size_t top_k) {
    const TilingLayout& layout = c.layout();
    std::vector<std::size_t> order;
    if (top_k == 0) {
        order.resize(c.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    } else {
        order = c.order_by_magnitude();
        order.resize(std::min(top_k, order.size()));
    }
    std::string csv = "j,ell,m1,m2,re,im\n";
    char buf[160];
    for (std::size_t flat : order) {
        const CoefficientIndex idx = c.decode(flat);
        const auto& w = layout.wedges[idx.wedge];
        const auto v = c.values()[flat];
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.17g,%.17g\n", w.index.j, w.index.ell, idx.m1, idx.m2, v.real(),
                      v.imag());
        csv += buf;
    }
    DumpPaths paths{stem + ".json", stem + ".csv"};
    nlohmann::json header = layout_to_json(layout);
    header["csv"] = fs::path(paths.csv).filename().string();
    header["rows"] = order.size();
    header["selection"] = top_k == 0 ? std::string("all") : "top " + std::to_string(top_k);
    const fs::path dir = fs::path(stem).parent_path();
    if (!dir.empty()) {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + dir.string());
    }
    atomic_write(paths.csv, csv);
    atomic_write(paths.json, header.dump(2) + "\n");
    return paths;
}

}  // namespace curvlab
