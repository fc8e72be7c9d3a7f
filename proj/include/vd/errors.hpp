// Copyright 2026 The vdsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace vd {

/// Violated precondition or argument contract.
struct contract_error : std::invalid_argument {
    explicit contract_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Requested register or operator exceeds the configured size limits.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerically degenerate input (vanishing purity, vanishing denominator, ...).
struct degenerate_error : std::runtime_error {
    explicit degenerate_error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid experiment configuration (maps to CLI exit code 2).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

namespace limits {
/// Largest total register a dense operator construction may span.
inline constexpr int max_tensor_qubits = 14;
/// Largest distillation register 2N+1 (so N <= 6 input qubits).
inline constexpr int max_vd_register = 13;
}  // namespace limits

}  // namespace vd
