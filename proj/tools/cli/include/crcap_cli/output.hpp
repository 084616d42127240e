// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#ifndef CRCAP_CLI_OUTPUT_HPP
#define CRCAP_CLI_OUTPUT_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace crcap::cli {

/// printf("%.10g") without locale dependence; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);

struct Table {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    /// '#' comment lines, header row, then rows; ',' separated, '\n' terminated.
    std::string to_csv() const;
};

struct PlotSpec {
    std::string title;
    std::string x_column;
    std::string x_label;
    bool log_x = false;
    std::vector<std::string> y_columns;
    std::string y_label;
    /// One curve per distinct (sl_csi, cl_csi) pair found in these series labels.
    std::vector<std::string> series;
};

/// gnuplot script that plots `csv_name` (relative to the script) into a PNG.
std::string gnuplot_script(const std::string& csv_name, const Table& table, const PlotSpec& style);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace crcap::cli

#endif
