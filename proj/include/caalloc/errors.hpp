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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace caalloc {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad dimensions, broken invariants, unparsable documents.
class InvalidInput : public Error {
 public:
    using Error::Error;
};

/// The solver was asked for a shape it has no closed form for.
class UnsupportedShape : public InvalidInput {
 public:
    using InvalidInput::InvalidInput;
};

/// A capacity ratio comparison with both denominators zero.
class UndefinedComparison : public InvalidInput {
 public:
    using InvalidInput::InvalidInput;
};

/// Cobb-Douglas objective with a VNF no machine can serve: every allocation is -inf.
class InfeasibleObjective : public Error {
 public:
    InfeasibleObjective(std::string message, std::vector<std::size_t> vnfs)
        : Error(std::move(message)), vnfs_(std::move(vnfs)) {}

    const std::vector<std::size_t>& vnfs() const noexcept { return vnfs_; }

 private:
    std::vector<std::size_t> vnfs_;
};

struct UnreachableVnf {
    std::size_t vnf = 0;
    std::string name;
    double required = 0.0;
    double max_achievable = 0.0;
};

/// Throughput requirements that no feasible allocation meets.
class InfeasibleRequirements : public Error {
 public:
    InfeasibleRequirements(std::string message, std::vector<UnreachableVnf> unreachable)
        : Error(std::move(message)), unreachable_(std::move(unreachable)) {}

    const std::vector<UnreachableVnf>& unreachable() const noexcept { return unreachable_; }

 private:
    std::vector<UnreachableVnf> unreachable_;
};

/// Grid enumeration larger than the configured budget.
class BudgetExceeded : public Error {
 public:
    BudgetExceeded(std::string message, double count)
        : Error(std::move(message)), count_(count) {}

    /// Number of grid points the request would have enumerated (may exceed 2^64).
    double count() const noexcept { return count_; }

 private:
    double count_;
};

}  // namespace caalloc
