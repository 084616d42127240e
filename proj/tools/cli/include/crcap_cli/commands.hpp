// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#ifndef CRCAP_CLI_COMMANDS_HPP
#define CRCAP_CLI_COMMANDS_HPP

#include "crcap_cli/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace crcap::cli {

enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_config = 2, exit_numerical = 3 };

struct RunOptions {
    std::filesystem::path out_dir = ".";
    unsigned threads = 0;
    bool strict = false;
    /// Test hook for `verify`: scale the solved multiplier by this factor.
    double lambda_scale = 1.0;
};

struct CommandOutput {
    int exit_code = exit_ok;
    /// Files written, relative to out_dir.
    std::vector<std::string> files;
};

CommandOutput cmd_capacity(const RunConfig& cfg, const RunOptions& opt, std::ostream& err);
CommandOutput cmd_asymptote(const RunConfig& cfg, const RunOptions& opt, std::ostream& err);
CommandOutput cmd_onoff(const RunConfig& cfg, const RunOptions& opt, std::ostream& err);
CommandOutput cmd_verify(const RunConfig& cfg, const RunOptions& opt, std::ostream& out, std::ostream& err);

/// Full command line, returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace crcap::cli

#endif
