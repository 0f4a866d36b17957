// Copyright 2026 The geomgate Authors
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

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace geomgate::minitoml {

// Minimal TOML subset sufficient for the experiment configs: top-level and
// [table] sections, `key = value` lines, values of type string, bool,
// integer, float, and flat arrays of numbers or strings.  Comments start
// with '#'.  No nested tables, no multi-line values, no datetime.

using Value = std::variant<bool, std::int64_t, double, std::string,
                           std::vector<double>, std::vector<std::string>>;

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("toml parse error (line " + std::to_string(line) +
                           "): " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct Document {
  // tables[""] holds the top-level keys.
  std::map<std::string, std::map<std::string, Value>> tables;

  bool has(const std::string& table, const std::string& key) const;
  double get_double(const std::string& table, const std::string& key,
                    double fallback) const;
  std::int64_t get_int(const std::string& table, const std::string& key,
                       std::int64_t fallback) const;
  bool get_bool(const std::string& table, const std::string& key,
                bool fallback) const;
  std::string get_string(const std::string& table, const std::string& key,
                         const std::string& fallback) const;
};

Document parse(const std::string& text);
Document parse_file(const std::string& path);

}  // namespace geomgate::minitoml
