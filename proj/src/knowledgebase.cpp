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

#include "caalloc/knowledgebase.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace caalloc {

namespace {

using nlohmann::json;

std::string at_index(const std::string& path, std::size_t k) { return path + "[" + std::to_string(k) + "]"; }

const json& require_field(const json& object, const std::string& path, const char* key) {
    auto it = object.find(key);
    if (it == object.end()) {
        throw KnowledgebaseError(path + "." + key, "missing field");
    }
    return *it;
}

std::string require_string(const json& object, const std::string& path, const char* key, bool non_empty = true) {
    const auto& value = require_field(object, path, key);
    if (!value.is_string()) {
        throw KnowledgebaseError(path + "." + key, "expected a string");
    }
    auto text = value.get<std::string>();
    if (non_empty && text.empty()) {
        throw KnowledgebaseError(path + "." + key, "must be non-empty");
    }
    return text;
}

const json& require_array(const json& object, const std::string& path, const char* key) {
    const auto& value = require_field(object, path, key);
    if (!value.is_array()) {
        throw KnowledgebaseError(path + "." + key, "expected an array");
    }
    return value;
}

void require_object(const json& value, const std::string& path) {
    if (!value.is_object()) {
        throw KnowledgebaseError(path, "expected an object");
    }
}

CapacityCurve parse_curve(const json& value, const std::string& path, const std::string& pair) {
    if (!value.is_array()) {
        throw KnowledgebaseError(path, "expected an array of [fraction, capacity] pairs");
    }
    std::vector<CurveSample> samples;
    for (std::size_t k = 0; k < value.size(); ++k) {
        const auto& pair = value[k];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
            throw KnowledgebaseError(at_index(path, k), "expected a [fraction, capacity] number pair");
        }
        samples.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    if (auto problem = CapacityCurve::check(samples)) {
        throw KnowledgebaseError(path, "curve for " + pair + ": " + *problem);
    }
    return CapacityCurve(std::move(samples));
}

}  // namespace

const CapacityEntry* KnowledgebaseDocument::find(std::string_view machine, std::string_view vnf) const {
    auto it = std::find_if(capacity.begin(), capacity.end(),
                           [&](const CapacityEntry& e) { return e.machine == machine && e.vnf == vnf; });
    return it == capacity.end() ? nullptr : &*it;
}

std::vector<std::string> KnowledgebaseDocument::machine_names() const {
    std::vector<std::string> names;
    for (const auto& m : machines) names.push_back(m.name);
    return names;
}

std::vector<std::string> KnowledgebaseDocument::vnf_names() const {
    std::vector<std::string> names;
    for (const auto& v : vnfs) names.push_back(v.name);
    return names;
}

KnowledgebaseDocument load_document(std::string_view bytes) {
    json root;
    try {
        root = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw KnowledgebaseError("$", std::string("malformed JSON: ") + e.what());
    }
    require_object(root, "$");

    KnowledgebaseDocument doc;
    doc.version = require_string(root, "$", "version");
    if (doc.version != kKnowledgebaseVersion) {
        throw KnowledgebaseError("$.version", "unsupported version '" + doc.version + "', expected '" +
                                                  std::string(kKnowledgebaseVersion) + "'");
    }
    doc.units = require_string(root, "$", "units");

    std::set<std::string> vnf_names;
    const auto& vnfs = require_array(root, "$", "vnfs");
    for (std::size_t k = 0; k < vnfs.size(); ++k) {
        const auto path = at_index("$.vnfs", k);
        require_object(vnfs[k], path);
        VnfEntry entry{require_string(vnfs[k], path, "name")};
        if (!vnf_names.insert(entry.name).second) {
            throw KnowledgebaseError(path + ".name", "duplicate vnf '" + entry.name + "'");
        }
        doc.vnfs.push_back(std::move(entry));
    }

    std::set<std::string> machine_names;
    const auto& machines = require_array(root, "$", "machines");
    for (std::size_t k = 0; k < machines.size(); ++k) {
        const auto path = at_index("$.machines", k);
        require_object(machines[k], path);
        MachineEntry entry{require_string(machines[k], path, "name"), std::nullopt};
        if (machines[k].contains("description")) {
            entry.description = require_string(machines[k], path, "description", false);
        }
        if (!machine_names.insert(entry.name).second) {
            throw KnowledgebaseError(path + ".name", "duplicate machine '" + entry.name + "'");
        }
        doc.machines.push_back(std::move(entry));
    }

    std::set<std::pair<std::string, std::string>> seen;
    const auto& capacity = require_array(root, "$", "capacity");
    for (std::size_t k = 0; k < capacity.size(); ++k) {
        const auto path = at_index("$.capacity", k);
        require_object(capacity[k], path);
        auto machine = require_string(capacity[k], path, "machine");
        auto vnf = require_string(capacity[k], path, "vnf");
        if (!machine_names.contains(machine)) {
            throw KnowledgebaseError(path + ".machine", "unknown machine '" + machine + "'");
        }
        if (!vnf_names.contains(vnf)) {
            throw KnowledgebaseError(path + ".vnf", "unknown vnf '" + vnf + "'");
        }
        if (!seen.emplace(machine, vnf).second) {
            throw KnowledgebaseError(path, "duplicate entry for (" + machine + ", " + vnf + ")");
        }
        auto curve = parse_curve(require_field(capacity[k], path, "curve"), path + ".curve",
                                 "(" + machine + ", " + vnf + ")");
        doc.capacity.push_back({std::move(machine), std::move(vnf), std::move(curve)});
    }
    return doc;
}

KnowledgebaseDocument load_document_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw KnowledgebaseError("$", "cannot read knowledgebase file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_document(buffer.str());
}

std::string serialize_document(const KnowledgebaseDocument& doc) {
    nlohmann::ordered_json root;
    root["version"] = doc.version;
    root["units"] = doc.units;
    root["vnfs"] = nlohmann::ordered_json::array();
    for (const auto& v : doc.vnfs) root["vnfs"].push_back({{"name", v.name}});
    root["machines"] = nlohmann::ordered_json::array();
    for (const auto& m : doc.machines) {
        nlohmann::ordered_json entry;
        entry["name"] = m.name;
        if (m.description) entry["description"] = *m.description;
        root["machines"].push_back(std::move(entry));
    }
    root["capacity"] = nlohmann::ordered_json::array();
    for (const auto& c : doc.capacity) {
        nlohmann::ordered_json entry;
        entry["machine"] = c.machine;
        entry["vnf"] = c.vnf;
        entry["curve"] = nlohmann::ordered_json::array();
        for (const auto& s : c.curve.samples()) entry["curve"].push_back({s.fraction, s.capacity});
        root["capacity"].push_back(std::move(entry));
    }
    return root.dump(2) + "\n";
}

CapacityModel build_model(const KnowledgebaseDocument& doc, std::span<const std::string> machines,
                          std::span<const std::string> vnfs) {
    if (machines.empty()) throw InvalidInput("empty machine subset");
    if (vnfs.empty()) throw InvalidInput("empty vnf subset");
    for (const auto& name : machines) {
        if (std::none_of(doc.machines.begin(), doc.machines.end(), [&](const auto& m) { return m.name == name; })) {
            throw InvalidInput("unknown machine '" + name + "'");
        }
    }
    for (const auto& name : vnfs) {
        if (std::none_of(doc.vnfs.begin(), doc.vnfs.end(), [&](const auto& v) { return v.name == name; })) {
            throw InvalidInput("unknown vnf '" + name + "'");
        }
    }

    std::vector<CapacityCurve> curves;
    std::vector<std::string> missing;
    for (const auto& machine : machines) {
        for (const auto& vnf : vnfs) {
            if (const auto* entry = doc.find(machine, vnf)) {
                curves.push_back(entry->curve);
            } else {
                missing.push_back("(" + machine + ", " + vnf + ")");
            }
        }
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        throw InvalidInput("incomplete grid: no capacity for " + list);
    }
    return CapacityModel({machines.begin(), machines.end()}, {vnfs.begin(), vnfs.end()}, std::move(curves));
}

CapacityModel build_model(const KnowledgebaseDocument& doc) {
    const auto machines = doc.machine_names();
    const auto vnfs = doc.vnf_names();
    return build_model(doc, machines, vnfs);
}

double query_capacity(const KnowledgebaseDocument& doc, std::string_view machine, std::string_view vnf,
                      double fraction) {
    const auto* entry = doc.find(machine, vnf);
    if (entry == nullptr) {
        throw InvalidInput("no capacity stored for (" + std::string(machine) + ", " + std::string(vnf) + ")");
    }
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        std::ostringstream msg;
        msg << "fraction " << fraction << " is outside [0, 1]";
        throw InvalidInput(msg.str());
    }
    return entry->curve.at(fraction);
}

}  // namespace caalloc
