// Copyright 2026 The Rolecast Authors.
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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rolecast {

// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data violates a schema or invariant. Carries the 1-based line number
// when the problem can be located in a file (0 otherwise).
class DataError : public Error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Invalid configuration or mismatched resources.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The three user roles. The numeric value doubles as the class index in
// every probability vector and confusion matrix.
enum class Role : int { Male = 0, Female = 1, Brand = 2 };

// Tri classifies all three roles; Bi is the male/female variant.
enum class ClassMode { Tri, Bi };

inline std::size_t class_count(ClassMode mode) {
  return mode == ClassMode::Tri ? 3 : 2;
}

inline std::vector<Role> roles_of(ClassMode mode) {
  if (mode == ClassMode::Tri) return {Role::Male, Role::Female, Role::Brand};
  return {Role::Male, Role::Female};
}

inline int class_index(Role r) { return static_cast<int>(r); }

std::string_view role_name(Role r);   // "male"
std::string_view role_title(Role r);  // "Male"
std::optional<Role> parse_role(std::string_view s);

std::string_view mode_name(ClassMode m);
ClassMode parse_mode(std::string_view s);

}  // namespace rolecast
