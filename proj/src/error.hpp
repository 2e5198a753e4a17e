// Copyright 2026 The qnd-lab Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qnd {

/// Error categories; these map one-to-one onto the C API status codes.
enum class Status {
    Ok = 0,
    InvalidArgument,
    Validation,
    SingularPreparation,
    GridResolution,
    Tolerance,
    Calibration,
    Io,
    Internal,
};

class Error : public std::runtime_error {
  public:
    Error(Status status, const std::string& message)
        : std::runtime_error(message), status_(status) {
    }
    Status status() const noexcept {
        return status_;
    }

  private:
    Status status_;
};

[[noreturn]] inline void fail(Status status, const std::string& message) {
    throw Error(status, message);
}

inline void require(bool condition, Status status, const std::string& message) {
    if (!condition) {
        fail(status, message);
    }
}

}  // namespace qnd
