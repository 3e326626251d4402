// Copyright 2026 The bmatch Authors
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

#ifndef BMATCH_ERROR_HPP_
#define BMATCH_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace bmatch {

// Every failure raised by the library carries a short machine-readable code
// ("loop", "vertex-range", "kernel-budget", ...) next to the message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace bmatch

#endif  // BMATCH_ERROR_HPP_
