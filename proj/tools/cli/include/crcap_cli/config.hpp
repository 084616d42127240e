// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#ifndef CRCAP_CLI_CONFIG_HPP
#define CRCAP_CLI_CONFIG_HPP

#include "crcap/capacity.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace crcap::cli {

/// Bad config file or command line. Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double db_to_linear(double db);
double linear_to_db(double linear);

/// "none", "perfect" or "estimated:<alpha>".
CsiKnowledge parse_csi(const std::string& text);
std::string format_csi(const CsiKnowledge& csi);

struct Series {
    CsiKnowledge sl_csi = CsiKnowledge::perfect();
    CsiKnowledge cl_csi = CsiKnowledge::perfect();
};

struct SweepSpec {
    SweepAxis axis = SweepAxis::p_avg;
    double start = 0.0;
    double stop = 0.0;
    int points = 1;
    bool log_spacing = false;

    /// Grid in the axis' config units (dB for p_avg and i_peak).
    std::vector<double> grid() const;
    /// Converts a grid value to the model's linear parameter.
    double to_model(double value) const;
    /// CSV column name, e.g. "p_avg_db".
    std::string column() const;
};

struct RunConfig {
    std::vector<Series> series;
    double p_avg_db = 0.0;
    double i_peak_db = 10.0;
    double epsilon = 0.05;
    SweepSpec sweep;
    bool has_sweep = false;
    NumericSettings numerics;
    std::uint64_t mc_samples = 1000000;
    std::uint64_t mc_seed = 42;
    std::string output_name;
    bool plot = true;
    bool with_capacity = true;

    ScenarioConfig scenario(const Series& s) const;
};

/// Reads the INI-style config. Sections: scenario, sweep, numerics,
/// monte_carlo, output, asymptote. Unknown sections or keys throw ConfigError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

} // namespace crcap::cli

#endif
