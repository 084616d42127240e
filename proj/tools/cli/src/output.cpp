// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#include "crcap_cli/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace crcap::cli {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 10);
    return std::string(buf, res.ptr);
}

std::string Table::to_csv() const {
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(columns);
    for (const auto& r : rows) line(r);
    return out;
}

std::string gnuplot_script(const std::string& csv_name, const Table& table, const PlotSpec& style) {
    auto column_index = [&](const std::string& name) {
        const auto it = std::find(table.columns.begin(), table.columns.end(), name);
        if (it == table.columns.end()) throw std::logic_error("gnuplot_script: no column " + name);
        return std::to_string(it - table.columns.begin() + 1);
    };
    std::string stem = csv_name.substr(0, csv_name.rfind('.'));
    std::string s;
    s += "# Generated by crcap. Run: gnuplot " + stem + ".gp\n";
    s += "set terminal pngcairo noenhanced size 960,640\n";
    s += "set output '" + stem + ".png'\n";
    s += "set datafile separator ','\n";
    s += "set datafile columnheaders\n";
    s += "set title '" + style.title + "'\n";
    s += "set xlabel '" + style.x_label + "'\n";
    s += "set ylabel '" + style.y_label + "'\n";
    if (style.log_x) s += "set logscale x\n";
    s += "set grid\nset key left top\n";
    const std::string xc = column_index(style.x_column);
    std::string plot = "plot";
    bool first = true;
    for (const std::string& label : style.series) {
        const auto sep = label.find('|');
        const std::string sl = label.substr(0, sep);
        const std::string cl = label.substr(sep + 1);
        for (const std::string& y : style.y_columns) {
            plot += first ? " " : ", \\\n     ";
            first = false;
            plot += "'" + csv_name + "' using " + xc + ":((strcol(1) eq '" + sl + "' && strcol(2) eq '" + cl +
                    "') ? column(" + column_index(y) + ") : NaN) with linespoints title '" + y + " SL " + sl +
                    " CL " + cl + "'";
        }
    }
    s += plot + "\n";
    return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

} // namespace crcap::cli
