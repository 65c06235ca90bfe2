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

#include "caalloc/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "caalloc/errors.hpp"

namespace caalloc {

namespace {

std::string describe_shape(std::size_t rows, std::size_t cols) {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

void require_shape(const Allocation& u, const CapacityModel& model) {
    if (u.rows() != model.machines() || u.cols() != model.vnfs()) {
        throw InvalidInput("allocation is " + describe_shape(u.rows(), u.cols()) + " but the model is " +
                           describe_shape(model.machines(), model.vnfs()));
    }
}

void require_unique(std::span<const std::string> names, const char* what) {
    std::set<std::string_view> seen;
    for (const auto& name : names) {
        if (name.empty()) {
            throw InvalidInput(std::string(what) + " names must be non-empty");
        }
        if (!seen.insert(name).second) {
            throw InvalidInput("duplicate " + std::string(what) + " name '" + name + "'");
        }
    }
}

}  // namespace

// --- CapacityCurve -----------------------------------------------------------

std::optional<std::string> CapacityCurve::check(std::span<const CurveSample> samples) {
    if (samples.size() < 2) {
        return "a curve needs at least two samples";
    }
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const auto& s = samples[k];
        if (!std::isfinite(s.fraction) || !std::isfinite(s.capacity)) {
            return "sample " + std::to_string(k) + " is not finite";
        }
        if (s.capacity < 0.0) {
            return "sample " + std::to_string(k) + " has negative capacity";
        }
    }
    if (samples.front().fraction != 0.0 || samples.front().capacity != 0.0) {
        return "first sample must be (0, 0)";
    }
    if (samples.back().fraction != 1.0) {
        return "last sample must have fraction 1";
    }
    for (std::size_t k = 1; k < samples.size(); ++k) {
        if (!(samples[k].fraction > samples[k - 1].fraction)) {
            return "fractions not strictly increasing at sample " + std::to_string(k);
        }
        if (samples[k].capacity < samples[k - 1].capacity) {
            return "capacities decrease at sample " + std::to_string(k);
        }
    }
    return std::nullopt;
}

CapacityCurve::CapacityCurve(std::vector<CurveSample> samples) : samples_(std::move(samples)) {
    if (auto problem = check(samples_)) {
        throw InvalidInput("invalid capacity curve: " + *problem);
    }
}

CapacityCurve CapacityCurve::linear(double full_capacity) {
    return CapacityCurve({{0.0, 0.0}, {1.0, full_capacity}});
}

double CapacityCurve::at(double fraction) const {
    fraction = std::clamp(fraction, 0.0, 1.0);
    auto upper = std::lower_bound(samples_.begin(), samples_.end(), fraction,
                                  [](const CurveSample& s, double f) { return s.fraction < f; });
    if (upper->fraction == fraction) {
        return upper->capacity;
    }
    const auto& hi = *upper;
    const auto& lo = *(upper - 1);
    const double t = (fraction - lo.fraction) / (hi.fraction - lo.fraction);
    return lo.capacity + t * (hi.capacity - lo.capacity);
}

// --- CapacityModel -----------------------------------------------------------

CapacityModel::CapacityModel(std::vector<std::string> machines, std::vector<std::string> vnfs,
                             std::vector<CapacityCurve> curves)
    : machine_names_(std::move(machines)), vnf_names_(std::move(vnfs)), curves_(std::move(curves)) {
    if (machine_names_.empty() || vnf_names_.empty()) {
        throw InvalidInput("a model needs at least one machine and one vnf");
    }
    require_unique(machine_names_, "machine");
    require_unique(vnf_names_, "vnf");
    if (curves_.size() != machine_names_.size() * vnf_names_.size()) {
        throw InvalidInput("expected " + std::to_string(machine_names_.size() * vnf_names_.size()) +
                           " capacity curves, got " + std::to_string(curves_.size()));
    }
    linear_only_ = std::all_of(curves_.begin(), curves_.end(), [](const auto& c) { return c.is_linear(); });
}

CapacityModel CapacityModel::linear(const CapacityMatrix& b, std::vector<std::string> machines,
                                    std::vector<std::string> vnfs) {
    if (machines.empty()) {
        for (std::size_t i = 0; i < b.rows(); ++i) machines.push_back("machine" + std::to_string(i + 1));
    }
    if (vnfs.empty()) {
        for (std::size_t j = 0; j < b.cols(); ++j) vnfs.push_back("vnf" + std::to_string(j + 1));
    }
    if (machines.size() != b.rows() || vnfs.size() != b.cols()) {
        throw InvalidInput("name lists do not match the " + describe_shape(b.rows(), b.cols()) +
                           " capacity matrix");
    }
    std::vector<CapacityCurve> curves;
    curves.reserve(b.rows() * b.cols());
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            curves.push_back(CapacityCurve::linear(b(i, j)));
        }
    }
    return CapacityModel(std::move(machines), std::move(vnfs), std::move(curves));
}

CapacityMatrix CapacityModel::capacities() const {
    CapacityMatrix b(machines(), vnfs());
    for (std::size_t i = 0; i < machines(); ++i) {
        for (std::size_t j = 0; j < vnfs(); ++j) {
            b(i, j) = capacity(i, j);
        }
    }
    return b;
}

std::vector<std::size_t> CapacityModel::dead_vnfs() const {
    std::vector<std::size_t> dead;
    for (std::size_t j = 0; j < vnfs(); ++j) {
        bool any = false;
        for (std::size_t i = 0; i < machines() && !any; ++i) {
            any = capacity(i, j) > 0.0;
        }
        if (!any) dead.push_back(j);
    }
    return dead;
}

// --- UtilitySpec -------------------------------------------------------------

UtilitySpec UtilitySpec::cobb_douglas(std::vector<double> weights) {
    if (weights.empty()) {
        throw InvalidInput("cobb-douglas weights must be non-empty");
    }
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw InvalidInput("cobb-douglas weights must be strictly positive");
        }
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "cobb-douglas weights must sum to 1 (got " << total << ")";
        throw InvalidInput(msg.str());
    }
    return UtilitySpec(CobbDouglas{std::move(weights)});
}

UtilitySpec UtilitySpec::linear(std::vector<double> weights, std::optional<std::vector<double>> requirements) {
    if (weights.empty()) {
        throw InvalidInput("linear weights must be non-empty");
    }
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw InvalidInput("linear weights must be strictly positive");
        }
    }
    if (requirements) {
        if (requirements->size() != weights.size()) {
            throw InvalidInput("requirements have length " + std::to_string(requirements->size()) +
                               " but there are " + std::to_string(weights.size()) + " weights");
        }
        for (double r : *requirements) {
            if (!(r >= 0.0) || !std::isfinite(r)) {
                throw InvalidInput("requirements must be finite and non-negative");
            }
        }
    }
    return UtilitySpec(Linear{std::move(weights), std::move(requirements)});
}

std::span<const double> UtilitySpec::weights() const {
    return std::visit([](const auto& v) { return std::span<const double>(v.weights); }, variant_);
}

bool UtilitySpec::has_requirements() const {
    if (!is_linear() || !linear().requirements) return false;
    const auto& r = *linear().requirements;
    return std::any_of(r.begin(), r.end(), [](double v) { return v > 0.0; });
}

// --- evaluation --------------------------------------------------------------

AllocationValidation validate_allocation(const Allocation& u, const CapacityModel& model) {
    require_shape(u, model);
    AllocationValidation result;
    for (std::size_t i = 0; i < u.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < u.cols(); ++j) {
            const double v = u(i, j);
            if (!std::isfinite(v)) {
                result.non_finite_entries.push_back({i, j, v});
                continue;
            }
            if (v < 0.0) {
                result.negative_entries.push_back({i, j, v});
            }
            sum += v;
        }
        if (sum > 1.0 + kFeasibilityTolerance) {
            result.overfull_rows.push_back({i, sum});
        }
    }
    return result;
}

ThroughputVector evaluate_throughput(const Allocation& u, const CapacityModel& model) {
    require_shape(u, model);
    ThroughputVector x(model.vnfs(), 0.0);
    for (std::size_t i = 0; i < model.machines(); ++i) {
        for (std::size_t j = 0; j < model.vnfs(); ++j) {
            const auto& curve = model.curve(i, j);
            x[j] += curve.is_linear() ? curve.full_capacity() * std::clamp(u(i, j), 0.0, 1.0)
                                      : curve.at(u(i, j));
        }
    }
    return x;
}

double evaluate_utility(std::span<const double> x, const UtilitySpec& spec) {
    const auto weights = spec.weights();
    if (x.size() != weights.size()) {
        throw InvalidInput("throughput has " + std::to_string(x.size()) + " components but the utility has " +
                           std::to_string(weights.size()) + " weights");
    }
    double value = 0.0;
    if (spec.is_cobb_douglas()) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (!(x[j] > 0.0)) {
                return -std::numeric_limits<double>::infinity();
            }
            value += weights[j] * std::log(x[j]);
        }
    } else {
        for (std::size_t j = 0; j < x.size(); ++j) {
            value += weights[j] * x[j];
        }
    }
    return value;
}

ShadowPrices shadow_prices(std::span<const double> x, const UtilitySpec& spec) {
    if (!spec.is_cobb_douglas()) {
        throw InvalidInput("shadow prices are defined for cobb-douglas utilities only");
    }
    const auto& alpha = spec.cobb_douglas().weights;
    if (x.size() != alpha.size()) {
        throw InvalidInput("throughput and weight lengths differ");
    }
    ShadowPrices p(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(x[j] > 0.0)) {
            throw InvalidInput("shadow price undefined: throughput of vnf " + std::to_string(j) + " is zero");
        }
        p[j] = alpha[j] / x[j];
    }
    return p;
}

bool meets_requirements(std::span<const double> x, const UtilitySpec& spec, double tolerance) {
    if (!spec.is_linear() || !spec.linear().requirements) return true;
    const auto& r = *spec.linear().requirements;
    for (std::size_t j = 0; j < r.size() && j < x.size(); ++j) {
        if (x[j] < r[j] - tolerance) return false;
    }
    return true;
}

}  // namespace caalloc
