// Copyright 2026 The psis Authors.
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

#ifndef PSIS_ERROR_HPP
#define PSIS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace psis {

enum class ErrorCode {
  kInvalidInput,
  kTailTooSmall,
  kDegenerateTail,
};

/// Exception thrown by every checked operation in the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace psis

#endif  // PSIS_ERROR_HPP
