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

/**
 * VNF performance knowledgebase: characterization data per (machine, VNF)
 * pair, including capacities at permitted partial allocations.
 *
 * Wire format (JSON, version "1"):
 *
 *     {"version": "1", "units": "kpps",
 *      "vnfs": [{"name": "snort"}],
 *      "machines": [{"name": "m1", "description": "..."}],
 *      "capacity": [{"machine": "m1", "vnf": "snort",
 *                    "curve": [[0.0, 0.0], [1.0, 21.0]]}]}
 *
 * Units are a label only. Descriptions are carried along and never read.
 */

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "caalloc/errors.hpp"
#include "caalloc/model.hpp"

namespace caalloc {

inline constexpr std::string_view kKnowledgebaseVersion = "1";

/// Invalid document; `path()` locates the offending field, e.g. "$.capacity[2].curve".
class KnowledgebaseError : public InvalidInput {
 public:
    KnowledgebaseError(std::string path, const std::string& reason)
        : InvalidInput(path + ": " + reason), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

 private:
    std::string path_;
};

struct MachineEntry {
    std::string name;
    std::optional<std::string> description;

    bool operator==(const MachineEntry&) const = default;
};

struct VnfEntry {
    std::string name;

    bool operator==(const VnfEntry&) const = default;
};

struct CapacityEntry {
    std::string machine;
    std::string vnf;
    CapacityCurve curve;

    bool operator==(const CapacityEntry&) const = default;
};

struct KnowledgebaseDocument {
    std::string version{kKnowledgebaseVersion};
    std::string units;
    std::vector<VnfEntry> vnfs;
    std::vector<MachineEntry> machines;
    std::vector<CapacityEntry> capacity;

    const CapacityEntry* find(std::string_view machine, std::string_view vnf) const;
    std::vector<std::string> machine_names() const;
    std::vector<std::string> vnf_names() const;

    bool operator==(const KnowledgebaseDocument&) const = default;
};

/// Parses and validates a document. Throws KnowledgebaseError.
KnowledgebaseDocument load_document(std::string_view bytes);

/// Reads and parses a file. Throws KnowledgebaseError (path "$") when the file cannot be read.
KnowledgebaseDocument load_document_file(const std::string& path);

/// Serializes with a fixed key order.
std::string serialize_document(const KnowledgebaseDocument& doc);

/// Model over the given subsets, curves in subset order. Throws InvalidInput on an empty
/// subset, an unknown name or an incomplete grid.
CapacityModel build_model(const KnowledgebaseDocument& doc, std::span<const std::string> machines,
                          std::span<const std::string> vnfs);

/// Model over every machine and VNF, in document order.
CapacityModel build_model(const KnowledgebaseDocument& doc);

/// Interpolated capacity of a stored curve. Throws InvalidInput on an unknown pair or a fraction outside [0, 1].
double query_capacity(const KnowledgebaseDocument& doc, std::string_view machine, std::string_view vnf,
                      double fraction);

}  // namespace caalloc
