// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace radionet {

/// Tensor shapes that do not fit an operation.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Violated caller contract (non-scalar loss, tx inside a building, ...).
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Argument outside a function's mathematical domain.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Inconsistent model, run or scene configuration.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Scene generation gave up after its retry budget.
struct GenerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or mismatching file contents.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Training diverged.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename Int>
std::string shape_str(const std::vector<Int>& shape) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << ", ";
        os << shape[i];
    }
    os << ']';
    return os.str();
}

}  // namespace radionet
