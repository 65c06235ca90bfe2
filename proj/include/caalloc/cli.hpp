// Copyright 2026 The caalloc Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "caalloc/model.hpp"

namespace caalloc::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalid = 2,
    kInfeasible = 3,
    kNotConverged = 4,
};

struct RunConfig {
    std::string kb_path;
    std::vector<std::string> machines;
    std::vector<std::string> vnfs;
    std::string utility = "cobb-douglas";
    std::vector<double> weights;
    std::optional<std::vector<double>> requirements;
    std::string strategy = "ca";
    double oracle_step = 0.05;
    std::string output = "table";
    std::string out_file;
    std::uint64_t seed = 1;
};

/// Prints v with 12 significant digits; non-finite values print as "inf", "-inf", "nan".
std::string format_number(double v);

/// v rounded to 12 significant digits (what the JSON writer emits).
double round_significant(double v);

/// Parses a standalone allocation document {"machines": [...], "vnfs": [...], "u": [[...]]}
/// or a solve report carrying one under "allocation". Throws KnowledgebaseError.
struct AllocationDocument {
    std::vector<std::string> machines;
    std::vector<std::string> vnfs;
    Allocation u;
};
AllocationDocument load_allocation(const std::string& text);

/// Entry point shared by the executable and the tests. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace caalloc::cli
