// Copyright 2026 The qlsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QLSIM_ERRORS_H
#define QLSIM_ERRORS_H

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qlsim {

/// Raised when an operation would place amplitude outside the Fock truncation.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Fit inputs that cannot determine the model (degenerate design, zero sigma, ...).
struct FitError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Config file problem. `line` is 0 when the problem is not tied to a single line.
struct ConfigError : std::runtime_error {
    ConfigError(std::size_t line, std::string field, const std::string &what)
        : std::runtime_error(format(line, field, what)), line(line), field(std::move(field)) {
    }

    std::size_t line;
    std::string field;

   private:
    static std::string format(std::size_t line, const std::string &field, const std::string &what) {
        std::string out = "config";
        if (line != 0) {
            out += ":" + std::to_string(line);
        }
        if (!field.empty()) {
            out += ": " + field;
        }
        return out + ": " + what;
    }
};

}  // namespace qlsim

#endif
