// Copyright 2026 The fairnmf Authors.
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

#ifndef FAIRNMF_ERRORS_HPP_
#define FAIRNMF_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace fairnmf {

// Exit codes: 0 ok, 2 validation, 3 numeric failure, 4 I/O.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
  static constexpr int exit_code = 2;
};

class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
  static constexpr int exit_code = 3;
};

class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
  static constexpr int exit_code = 4;
};

}  // namespace fairnmf

#endif  // FAIRNMF_ERRORS_HPP_
