// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#include "crcap_cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return crcap::cli::run_cli(argc, argv, std::cout, std::cerr); }
