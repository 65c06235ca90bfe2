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

#include "caalloc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "caalloc/ca_core.hpp"
#include "caalloc/errors.hpp"
#include "caalloc/knowledgebase.hpp"
#include "caalloc/solver.hpp"

namespace caalloc::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr std::string_view kRandomPrefix = "random:";

struct Loaded {
    KnowledgebaseDocument doc;
    CapacityModel model;
};

// --- number formatting ---------------------------------------------------------

ojson number_json(double v) {
    if (!std::isfinite(v)) return format_number(v);
    return round_significant(v);
}

ojson vector_json(std::span<const double> values) {
    auto array = ojson::array();
    for (double v : values) array.push_back(number_json(v));
    return array;
}

double total_of(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); }

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

std::vector<double> parse_numbers(const std::string& text, const char* flag) {
    std::vector<double> values;
    for (const auto& item : split_list(text)) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) {
            throw InvalidInput(std::string(flag) + ": '" + item + "' is not a number");
        }
        values.push_back(v);
    }
    return values;
}

// --- inputs ------------------------------------------------------------------------

KnowledgebaseDocument random_document(const std::string& spec, std::uint64_t seed) {
    const auto shape = spec.substr(kRandomPrefix.size());
    const auto x = shape.find('x');
    std::size_t n = 0;
    std::size_t m = 0;
    try {
        if (x == std::string::npos) throw std::invalid_argument("shape");
        n = std::stoul(shape.substr(0, x));
        m = std::stoul(shape.substr(x + 1));
    } catch (const std::exception&) {
        throw KnowledgebaseError("--kb", "random knowledgebase expects random:<machines>x<vnfs>, got '" + spec + "'");
    }
    if (n == 0 || m == 0 || n > 64 || m > 64) {
        throw KnowledgebaseError("--kb", "random knowledgebase dimensions must lie in 1..64");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> capacity(1, 10);
    KnowledgebaseDocument doc;
    doc.units = "units";
    for (std::size_t j = 0; j < m; ++j) doc.vnfs.push_back({"vnf" + std::to_string(j + 1)});
    for (std::size_t i = 0; i < n; ++i) {
        doc.machines.push_back({"machine" + std::to_string(i + 1), "random capacities, seed " + std::to_string(seed)});
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            doc.capacity.push_back({doc.machines[i].name, doc.vnfs[j].name,
                                    CapacityCurve::linear(static_cast<double>(capacity(rng)))});
        }
    }
    return doc;
}

Loaded load_inputs(const RunConfig& config) {
    auto doc = config.kb_path.starts_with(kRandomPrefix) ? random_document(config.kb_path, config.seed)
                                                         : load_document_file(config.kb_path);
    const auto machines = config.machines.empty() ? doc.machine_names() : config.machines;
    const auto vnfs = config.vnfs.empty() ? doc.vnf_names() : config.vnfs;
    auto model = build_model(doc, machines, vnfs);
    return {std::move(doc), std::move(model)};
}

UtilitySpec make_utility(const RunConfig& config, std::size_t m, std::ostream& err) {
    std::vector<double> weights = config.weights;
    if (config.utility == "cobb-douglas") {
        if (config.requirements) {
            throw InvalidInput("--requirements applies to the linear utility only");
        }
        if (weights.empty()) weights.assign(m, 1.0 / static_cast<double>(m));
        if (weights.size() != m) {
            throw InvalidInput("--alpha has " + std::to_string(weights.size()) + " entries for " + std::to_string(m) +
                               " vnfs");
        }
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        if (std::any_of(weights.begin(), weights.end(), [](double w) { return !(w > 0.0); })) {
            throw InvalidInput("--alpha entries must be strictly positive");
        }
        if (std::abs(total - 1.0) > 1e-9) {
            err << "warning: cobb-douglas weights sum to " << format_number(total) << "; normalizing\n";
            for (double& w : weights) w /= total;
        }
        return UtilitySpec::cobb_douglas(std::move(weights));
    }
    if (config.utility == "linear") {
        if (weights.empty()) weights.assign(m, 1.0);
        if (weights.size() != m) {
            throw InvalidInput("--weights has " + std::to_string(weights.size()) + " entries for " +
                               std::to_string(m) + " vnfs");
        }
        if (config.requirements && config.requirements->size() != m) {
            throw InvalidInput("--requirements has " + std::to_string(config.requirements->size()) +
                               " entries for " + std::to_string(m) + " vnfs");
        }
        return UtilitySpec::linear(std::move(weights), config.requirements);
    }
    throw InvalidInput("unknown utility '" + config.utility + "'");
}

// --- JSON rendering ------------------------------------------------------------------

ojson allocation_json(const CapacityModel& model, const Allocation& u) {
    ojson out;
    out["machines"] = ojson(std::vector<std::string>(model.machine_names().begin(), model.machine_names().end()));
    out["vnfs"] = ojson(std::vector<std::string>(model.vnf_names().begin(), model.vnf_names().end()));
    auto rows = ojson::array();
    for (std::size_t i = 0; i < u.rows(); ++i) rows.push_back(vector_json(u.row(i)));
    out["u"] = std::move(rows);
    return out;
}

ojson structure_json(const CapacityModel& model, const StructureCheck& check) {
    ojson out;
    out["holds"] = check.holds;
    out["inferred_threshold"] = check.inferred_threshold ? ojson(*check.inferred_threshold) : ojson(nullptr);
    auto violations = ojson::array();
    for (const auto& v : check.violations) {
        violations.push_back(
            {{"machine", model.machine_name(v.machine)}, {"vnf", model.vnf_name(v.vnf)}, {"value", number_json(v.value)}});
    }
    out["violations"] = std::move(violations);
    auto ties = ojson::array();
    for (const auto& [a, b] : check.ties) ties.push_back({a, b});
    out["ties"] = std::move(ties);
    return out;
}

std::string entity_name(const CapacityModel& model, Axis axis, std::size_t index) {
    return axis == Axis::machines ? model.machine_name(index) : model.vnf_name(index);
}

ojson diagnostics_json(const CapacityModel& model, const Diagnostics& d) {
    ojson out;
    out["iterations"] = d.iterations;
    out["converged"] = d.converged;
    if (d.foc_residual) out["foc_residual"] = number_json(*d.foc_residual);
    if (d.projected_gradient_norm) out["projected_gradient_norm"] = number_json(*d.projected_gradient_norm);
    if (d.threshold) {
        const auto axis = d.ordering ? d.ordering->axis : (model.vnfs() == 2 ? Axis::machines : Axis::vnfs);
        ojson t;
        t["position"] = d.threshold->position;
        t["name"] = entity_name(model, axis, d.threshold->index);
        t["theta"] = d.threshold->theta ? number_json(*d.threshold->theta) : ojson(nullptr);
        t["boundary"] = d.threshold->boundary;
        out["threshold"] = std::move(t);
    }
    if (d.shadow_prices) out["shadow_prices"] = vector_json(*d.shadow_prices);
    if (d.structure) out["structure"] = structure_json(model, *d.structure);
    if (d.ordering) {
        ojson o;
        o["axis"] = d.ordering->axis == Axis::machines ? "machines" : "vnfs";
        auto names = ojson::array();
        for (auto k : d.ordering->order) names.push_back(entity_name(model, d.ordering->axis, k));
        o["order"] = std::move(names);
        o["ratios"] = vector_json(d.ordering->ratios);
        out["ordering"] = std::move(o);
    }
    if (!d.binding.empty()) out["binding"] = d.binding;
    if (d.requirements_met) out["requirements_met"] = *d.requirements_met;
    if (!d.notes.empty()) out["notes"] = d.notes;
    return out;
}

ojson report_json(const CapacityModel& model, const SolveReport& report) {
    ojson out;
    out["strategy"] = report.strategy;
    out["allocation"] = allocation_json(model, report.allocation);
    out["throughput"] = vector_json(report.x);
    out["total"] = number_json(total_of(report.x));
    out["utility"] = number_json(report.utility);
    out["diagnostics"] = diagnostics_json(model, report.diagnostics);
    return out;
}

ojson header_json(const Loaded& in, const UtilitySpec& spec) {
    ojson out;
    out["units"] = in.doc.units;
    out["objective"] = spec.is_cobb_douglas() ? "cobb-douglas" : "linear";
    out["weights"] = vector_json(spec.weights());
    if (spec.is_linear() && spec.linear().requirements) out["requirements"] = vector_json(*spec.linear().requirements);
    return out;
}

// --- text rendering ------------------------------------------------------------------

std::string pad(const std::string& text, std::size_t width) {
    return text.size() >= width ? text + " " : text + std::string(width - text.size(), ' ');
}

std::string structure_text(const CapacityModel& model, const StructureCheck& check) {
    if (check.holds) {
        std::string text = "holds";
        if (check.inferred_threshold) text += " (threshold " + std::to_string(*check.inferred_threshold) + ")";
        if (!check.ties.empty()) text += ", ratio ties";
        return text;
    }
    std::string text = "violated at";
    for (const auto& v : check.violations) {
        text += " (" + model.machine_name(v.machine) + ", " + model.vnf_name(v.vnf) + ")";
    }
    return text;
}

void write_table(std::ostream& out, const Loaded& in, const UtilitySpec& spec, const SolveReport& report) {
    const auto& model = in.model;
    constexpr std::size_t w = 18;
    out << pad("strategy", w) << report.strategy << "\n";
    out << pad("objective", w) << (spec.is_cobb_douglas() ? "cobb-douglas" : "linear") << "\n\n";

    out << pad("allocation", w);
    for (const auto& name : model.vnf_names()) out << pad(name, w);
    out << "\n";
    for (std::size_t i = 0; i < model.machines(); ++i) {
        out << pad(model.machine_name(i), w);
        for (double v : report.allocation.row(i)) out << pad(format_number(v), w);
        out << "\n";
    }
    out << pad("throughput", w);
    for (double v : report.x) out << pad(format_number(v), w);
    out << "\n";
    out << pad("total", w) << format_number(total_of(report.x)) << " " << in.doc.units << "\n";
    out << pad("utility value", w) << format_number(report.utility) << "\n";

    const auto& d = report.diagnostics;
    if (d.threshold) {
        const auto axis = d.ordering ? d.ordering->axis : Axis::machines;
        out << pad("threshold", w) << d.threshold->position << " (" << entity_name(model, axis, d.threshold->index)
            << ")";
        if (d.threshold->theta) out << ", theta " << format_number(*d.threshold->theta);
        if (d.threshold->boundary) out << ", boundary";
        out << "\n";
    }
    if (d.foc_residual) out << pad("foc residual", w) << format_number(*d.foc_residual) << "\n";
    if (d.projected_gradient_norm) out << pad("pg norm", w) << format_number(*d.projected_gradient_norm) << "\n";
    if (d.shadow_prices) {
        out << pad("shadow prices", w);
        for (double p : *d.shadow_prices) out << pad(format_number(p), w);
        out << "\n";
    }
    if (d.structure) out << pad("structure", w) << structure_text(model, *d.structure) << "\n";
    if (!d.binding.empty()) {
        out << pad("binding", w);
        for (const auto& b : d.binding) out << b << " ";
        out << "\n";
    }
    if (d.requirements_met) out << pad("requirements met", w) << (*d.requirements_met ? "yes" : "no") << "\n";
    out << pad("iterations", w) << d.iterations << "\n";
    out << pad("converged", w) << (d.converged ? "yes" : "no") << "\n";
    for (const auto& note : d.notes) out << pad("note", w) << note << "\n";
}

void write_csv(std::ostream& out, const CapacityModel& model, const SolveReport& report) {
    out << "section,machine,vnf,value\n";
    for (std::size_t i = 0; i < model.machines(); ++i) {
        for (std::size_t j = 0; j < model.vnfs(); ++j) {
            out << "allocation," << model.machine_name(i) << "," << model.vnf_name(j) << ","
                << format_number(report.allocation(i, j)) << "\n";
        }
    }
    for (std::size_t j = 0; j < model.vnfs(); ++j) {
        out << "throughput,," << model.vnf_name(j) << "," << format_number(report.x[j]) << "\n";
    }
    out << "total,,," << format_number(total_of(report.x)) << "\n";
    out << "utility,,," << format_number(report.utility) << "\n";
}

void write_compare(std::ostream& out, const std::string& format, const Loaded& in, const UtilitySpec& spec,
                   const std::vector<StrategyOutcome>& outcomes) {
    const auto& model = in.model;
    auto structure_of = [&](const SolveReport& r) {
        return r.diagnostics.structure ? structure_text(model, *r.diagnostics.structure) : std::string("n/a");
    };
    if (format == "json") {
        auto root = header_json(in, spec);
        auto rows = ojson::array();
        for (const auto& o : outcomes) {
            ojson row;
            row["strategy"] = o.strategy;
            row["ok"] = o.report.has_value();
            if (o.report) {
                row["utility"] = number_json(o.report->utility);
                row["throughput"] = vector_json(o.report->x);
                row["total"] = number_json(total_of(o.report->x));
                row["structure"] = o.report->diagnostics.structure
                                       ? structure_json(model, *o.report->diagnostics.structure)
                                       : ojson(nullptr);
                row["allocation"] = allocation_json(model, o.report->allocation);
            } else {
                row["error"] = o.error;
            }
            rows.push_back(std::move(row));
        }
        root["strategies"] = std::move(rows);
        out << root.dump(2) << "\n";
        return;
    }
    if (format == "csv") {
        out << "strategy,vnf,throughput,total,utility,structure\n";
        for (const auto& o : outcomes) {
            if (!o.report) continue;
            const auto total = format_number(total_of(o.report->x));
            const auto utility = format_number(o.report->utility);
            auto structure = structure_of(*o.report);
            std::replace(structure.begin(), structure.end(), ',', ';');
            for (std::size_t j = 0; j < model.vnfs(); ++j) {
                out << o.strategy << "," << model.vnf_name(j) << "," << format_number(o.report->x[j]) << "," << total
                    << "," << utility << "," << structure << "\n";
            }
        }
        return;
    }
    constexpr std::size_t w = 18;
    out << pad("strategy", 10) << pad("utility", w);
    for (const auto& name : model.vnf_names()) out << pad(name, w);
    out << pad("total " + in.doc.units, w) << "structure\n";
    for (const auto& o : outcomes) {
        out << pad(o.strategy, 10);
        if (!o.report) {
            out << "error: " << o.error << "\n";
            continue;
        }
        out << pad(format_number(o.report->utility), w);
        for (double v : o.report->x) out << pad(format_number(v), w);
        out << pad(format_number(total_of(o.report->x)), w) << structure_of(*o.report) << "\n";
    }
}

// --- commands --------------------------------------------------------------------------

class OutputSink {
 public:
    OutputSink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw InvalidInput("cannot write --out-file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

 private:
    std::ofstream file_;
    std::ostream& fallback_;
};

void require_format(const std::string& format) {
    if (format != "table" && format != "json" && format != "csv") {
        throw InvalidInput("unknown --output '" + format + "'");
    }
}

int compare_command(const RunConfig& config, const Loaded& in, const UtilitySpec& spec, std::ostream& out) {
    CompareOptions options;
    options.oracle.grid_step = config.oracle_step;
    const auto outcomes = compare_strategies(in.model, spec, options);
    OutputSink sink(config.out_file, out);
    write_compare(sink.stream(), config.output, in, spec, outcomes);
    const bool any = std::any_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.report.has_value(); });
    if (any) return kOk;
    const bool infeasible =
        std::any_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.error_kind == "infeasible"; });
    return infeasible ? kInfeasible : kInvalid;
}

int solve_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
    require_format(config.output);
    const auto in = load_inputs(config);
    const auto spec = make_utility(config, in.model.vnfs(), err);

    if (config.strategy == "all") return compare_command(config, in, spec, out);

    SolveReport report;
    if (config.strategy == "ca") {
        report = solve_comparative_advantage(in.model, spec);
    } else if (config.strategy == "even") {
        report = make_report("even", in.model, spec, baseline_even_split(in.model));
    } else if (config.strategy == "absolute") {
        report = make_report("absolute", in.model, spec, baseline_absolute_advantage(in.model));
    } else if (config.strategy == "general") {
        report = spec.is_cobb_douglas() ? solve_general(in.model, spec) : solve_requirements_lp(in.model, spec);
    } else if (config.strategy == "oracle") {
        OracleConfig oracle;
        oracle.grid_step = config.oracle_step;
        report = brute_force_oracle(in.model, spec, oracle);
    } else {
        throw InvalidInput("unknown --strategy '" + config.strategy + "'");
    }
    if (!report.diagnostics.structure && (in.model.vnfs() == 2 || in.model.machines() == 2)) {
        try {
            report.diagnostics.structure = check_ca_structure(report.allocation, in.model);
        } catch (const InvalidInput&) {
        }
    }

    OutputSink sink(config.out_file, out);
    auto& stream = sink.stream();
    if (config.output == "json") {
        auto root = header_json(in, spec);
        const auto body = report_json(in.model, report);
        for (const auto& [key, value] : body.items()) root[key] = value;
        stream << root.dump(2) << "\n";
    } else if (config.output == "csv") {
        write_csv(stream, in.model, report);
    } else {
        write_table(stream, in, spec, report);
    }
    if (!report.diagnostics.converged) {
        err << "error: solver did not converge\n";
        return kNotConverged;
    }
    return kOk;
}

int compare_entry(const RunConfig& config, std::ostream& out, std::ostream& err) {
    require_format(config.output);
    const auto in = load_inputs(config);
    const auto spec = make_utility(config, in.model.vnfs(), err);
    return compare_command(config, in, spec, out);
}

int validate_command(const std::string& kb_path, const std::string& allocation_path, std::uint64_t seed,
                     std::ostream& out) {
    const auto doc = kb_path.starts_with(kRandomPrefix) ? random_document(kb_path, seed) : load_document_file(kb_path);
    const auto model = build_model(doc);
    out << "valid, " << model.machines() << " machines, " << model.vnfs() << " vnfs, "
        << (model.linear_only() ? "linear" : "curves") << "\n";
    if (allocation_path.empty()) return kOk;

    std::ifstream file(allocation_path, std::ios::binary);
    if (!file) throw KnowledgebaseError("$", "cannot read allocation file '" + allocation_path + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    const auto alloc = load_allocation(buffer.str());
    const auto sub = build_model(doc, alloc.machines, alloc.vnfs);

    const auto check = validate_allocation(alloc.u, sub);
    if (!check.valid()) {
        for (const auto& e : check.non_finite_entries) {
            out << "invalid: $.u[" << e.machine << "][" << e.vnf << "] is not finite\n";
        }
        for (const auto& e : check.negative_entries) {
            out << "invalid: $.u[" << e.machine << "][" << e.vnf << "] = " << format_number(e.value)
                << " is negative\n";
        }
        for (const auto& r : check.overfull_rows) {
            out << "invalid: $.u[" << r.machine << "] (row " << r.machine << ", " << sub.machine_name(r.machine)
                << ") sums to " << format_number(r.sum) << " > 1\n";
        }
        return kInvalid;
    }
    out << "allocation feasible, " << sub.machines() << "x" << sub.vnfs() << "\n";
    const auto x = evaluate_throughput(alloc.u, sub);
    out << "throughput";
    for (std::size_t j = 0; j < x.size(); ++j) out << " " << sub.vnf_name(j) << "=" << format_number(x[j]);
    out << ", total " << format_number(total_of(x)) << " " << doc.units << "\n";
    if (sub.vnfs() == 2 || sub.machines() == 2) {
        try {
            out << "structure " << structure_text(sub, check_ca_structure(alloc.u, sub)) << "\n";
        } catch (const InvalidInput& e) {
            out << "structure n/a (" << e.what() << ")\n";
        }
    }
    return kOk;
}

void add_model_flags(CLI::App* cmd, RunConfig& config, std::string& machines, std::string& vnfs,
                     std::string& weights, std::string& requirements) {
    cmd->add_option("--kb", config.kb_path, "knowledgebase JSON file, or random:<n>x<m>")->required();
    cmd->add_option("--machines", machines, "comma-separated machine subset");
    cmd->add_option("--vnfs", vnfs, "comma-separated vnf subset");
    cmd->add_option("--utility", config.utility, "cobb-douglas | linear")
        ->check(CLI::IsMember({"cobb-douglas", "linear"}));
    cmd->add_option("--alpha,--weights", weights, "comma-separated utility weights");
    cmd->add_option("--requirements", requirements, "comma-separated throughput floors (linear utility)");
    cmd->add_option("--oracle-step", config.oracle_step, "grid step of the brute-force oracle");
    cmd->add_option("--output", config.output, "table | json | csv")->check(CLI::IsMember({"table", "json", "csv"}));
    cmd->add_option("--out-file", config.out_file, "write the report here instead of stdout");
    cmd->add_option("--seed", config.seed, "seed for random:<n>x<m> knowledgebases");
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.12g", v);
    return buffer;
}

double round_significant(double v) {
    if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
    return std::stod(format_number(v));
}

AllocationDocument load_allocation(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw KnowledgebaseError("$", std::string("malformed JSON: ") + e.what());
    }
    std::string base = "$";
    if (root.is_object() && root.contains("allocation")) {
        root = root["allocation"];
        base = "$.allocation";
    }
    if (!root.is_object()) throw KnowledgebaseError(base, "expected an object");

    auto names = [&](const char* key) {
        const auto path = base + "." + key;
        if (!root.contains(key) || !root[key].is_array()) throw KnowledgebaseError(path, "expected an array of names");
        std::vector<std::string> out;
        for (std::size_t k = 0; k < root[key].size(); ++k) {
            if (!root[key][k].is_string()) {
                throw KnowledgebaseError(path + "[" + std::to_string(k) + "]", "expected a string");
            }
            out.push_back(root[key][k].get<std::string>());
        }
        return out;
    };
    AllocationDocument doc;
    doc.machines = names("machines");
    doc.vnfs = names("vnfs");

    const auto path = base + ".u";
    if (!root.contains("u") || !root["u"].is_array()) throw KnowledgebaseError(path, "expected a matrix");
    const auto& rows = root["u"];
    if (rows.size() != doc.machines.size()) {
        throw KnowledgebaseError(path, "has " + std::to_string(rows.size()) + " rows for " +
                                           std::to_string(doc.machines.size()) + " machines");
    }
    doc.u = Allocation(doc.machines.size(), doc.vnfs.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto row_path = path + "[" + std::to_string(i) + "]";
        if (!rows[i].is_array() || rows[i].size() != doc.vnfs.size()) {
            throw KnowledgebaseError(row_path, "expected " + std::to_string(doc.vnfs.size()) + " numbers");
        }
        for (std::size_t j = 0; j < doc.vnfs.size(); ++j) {
            if (!rows[i][j].is_number()) {
                throw KnowledgebaseError(row_path + "[" + std::to_string(j) + "]", "expected a number");
            }
            doc.u(i, j) = rows[i][j].get<double>();
        }
    }
    return doc;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Comparative-advantage allocation of machines to VNFs", "caalloc"};
    app.require_subcommand(1);

    RunConfig solve_config;
    std::string machines, vnfs, weights, requirements;
    auto* solve = app.add_subcommand("solve", "solve one allocation strategy");
    add_model_flags(solve, solve_config, machines, vnfs, weights, requirements);
    solve->add_option("--strategy", solve_config.strategy, "ca | even | absolute | general | oracle | all")
        ->check(CLI::IsMember({"ca", "even", "absolute", "general", "oracle", "all"}));

    RunConfig compare_config;
    std::string c_machines, c_vnfs, c_weights, c_requirements;
    auto* compare = app.add_subcommand("compare", "compare every strategy on one instance");
    add_model_flags(compare, compare_config, c_machines, c_vnfs, c_weights, c_requirements);

    std::string validate_kb;
    std::string validate_allocation_path;
    std::uint64_t validate_seed = 1;
    auto* validate = app.add_subcommand("validate", "check a knowledgebase and optionally an allocation");
    validate->add_option("--kb", validate_kb, "knowledgebase JSON file")->required();
    validate->add_option("--allocation", validate_allocation_path, "allocation JSON file");
    validate->add_option("--seed", validate_seed, "seed for random:<n>x<m> knowledgebases");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalid;
    }

    auto finish = [&](RunConfig& config, const std::string& m, const std::string& v, const std::string& w,
                      const std::string& r) {
        config.machines = split_list(m);
        config.vnfs = split_list(v);
        config.weights = parse_numbers(w, "--alpha/--weights");
        if (!r.empty()) config.requirements = parse_numbers(r, "--requirements");
    };

    try {
        if (solve->parsed()) {
            finish(solve_config, machines, vnfs, weights, requirements);
            return solve_command(solve_config, out, err);
        }
        if (compare->parsed()) {
            finish(compare_config, c_machines, c_vnfs, c_weights, c_requirements);
            return compare_entry(compare_config, out, err);
        }
        return validate_command(validate_kb, validate_allocation_path, validate_seed, out);
    } catch (const InfeasibleRequirements& e) {
        err << "infeasible: " << e.what() << "\n";
        return kInfeasible;
    } catch (const InfeasibleObjective& e) {
        err << "infeasible: " << e.what() << "\n";
        return kInfeasible;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }
}

}  // namespace caalloc::cli
