// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "headcue/cli.hpp"

int main(int argc, char** argv) { return headcue::cli::run(argc, argv); }
