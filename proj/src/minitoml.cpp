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

#include "geomgate/minitoml.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace geomgate::minitoml {

namespace {

std::string strip(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Removes a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
  bool in_string = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

std::string parse_string_literal(const std::string& raw, int line) {
  if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"') {
    throw ParseError(line, "malformed string: " + raw);
  }
  std::string out;
  for (size_t i = 1; i + 1 < raw.size(); ++i) {
    if (raw[i] == '\\' && i + 2 < raw.size()) {
      ++i;
      switch (raw[i]) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 't': out += '\t'; break;
        case 'n': out += '\n'; break;
        default:
          throw ParseError(line, "unsupported escape in string");
      }
    } else {
      out += raw[i];
    }
  }
  return out;
}

Value parse_scalar(const std::string& raw, int line) {
  if (raw.empty()) throw ParseError(line, "empty value");
  if (raw.front() == '"') return parse_string_literal(raw, line);
  if (raw == "true") return true;
  if (raw == "false") return false;

  const bool looks_float = raw.find_first_of(".eE") != std::string::npos ||
                           raw == "inf" || raw == "-inf" || raw == "nan";
  try {
    size_t used = 0;
    if (looks_float) {
      const double v = std::stod(raw, &used);
      if (used != raw.size()) throw std::invalid_argument(raw);
      return v;
    }
    const long long v = std::stoll(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return static_cast<std::int64_t>(v);
  } catch (const std::exception&) {
    throw ParseError(line, "cannot parse value: " + raw);
  }
}

std::vector<std::string> split_array_items(const std::string& body, int line) {
  std::vector<std::string> items;
  std::string current;
  bool in_string = false;
  for (char ch : body) {
    if (ch == '"') in_string = !in_string;
    if (ch == ',' && !in_string) {
      items.push_back(strip(current));
      current.clear();
    } else {
      current += ch;
    }
  }
  const std::string last = strip(current);
  if (!last.empty()) items.push_back(last);
  if (in_string) throw ParseError(line, "unterminated string in array");
  return items;
}

Value parse_value(const std::string& raw, int line) {
  if (raw.front() == '[') {
    if (raw.back() != ']') throw ParseError(line, "unterminated array");
    const auto items = split_array_items(raw.substr(1, raw.size() - 2), line);
    if (items.empty()) return std::vector<double>{};
    if (items.front().front() == '"') {
      std::vector<std::string> out;
      for (const auto& item : items)
        out.push_back(parse_string_literal(item, line));
      return out;
    }
    std::vector<double> out;
    for (const auto& item : items) {
      const Value v = parse_scalar(item, line);
      if (std::holds_alternative<double>(v)) {
        out.push_back(std::get<double>(v));
      } else if (std::holds_alternative<std::int64_t>(v)) {
        out.push_back(static_cast<double>(std::get<std::int64_t>(v)));
      } else {
        throw ParseError(line, "mixed array types");
      }
    }
    return out;
  }
  return parse_scalar(raw, line);
}

}  // namespace

Document parse(const std::string& text) {
  Document doc;
  doc.tables[""];
  std::string table;

  std::istringstream stream(text);
  std::string raw_line;
  int line_no = 0;
  while (std::getline(stream, raw_line)) {
    ++line_no;
    const std::string line = strip(strip_comment(raw_line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ParseError(line_no, "malformed table header");
      }
      table = strip(line.substr(1, line.size() - 2));
      if (table.empty() || table.find('.') != std::string::npos) {
        throw ParseError(line_no, "unsupported table name: " + table);
      }
      doc.tables[table];
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(line_no, "expected key = value");
    }
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "empty key");
    if (doc.tables[table].count(key)) {
      throw ParseError(line_no, "duplicate key: " + key);
    }
    doc.tables[table][key] = parse_value(value, line_no);
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

bool Document::has(const std::string& table, const std::string& key) const {
  const auto t = tables.find(table);
  return t != tables.end() && t->second.count(key) > 0;
}

double Document::get_double(const std::string& table, const std::string& key,
                            double fallback) const {
  const auto t = tables.find(table);
  if (t == tables.end()) return fallback;
  const auto v = t->second.find(key);
  if (v == t->second.end()) return fallback;
  if (std::holds_alternative<double>(v->second)) {
    return std::get<double>(v->second);
  }
  if (std::holds_alternative<std::int64_t>(v->second)) {
    return static_cast<double>(std::get<std::int64_t>(v->second));
  }
  throw std::runtime_error("config key " + table + "." + key +
                           " is not a number");
}

std::int64_t Document::get_int(const std::string& table,
                               const std::string& key,
                               std::int64_t fallback) const {
  const auto t = tables.find(table);
  if (t == tables.end()) return fallback;
  const auto v = t->second.find(key);
  if (v == t->second.end()) return fallback;
  if (std::holds_alternative<std::int64_t>(v->second)) {
    return std::get<std::int64_t>(v->second);
  }
  throw std::runtime_error("config key " + table + "." + key +
                           " is not an integer");
}

bool Document::get_bool(const std::string& table, const std::string& key,
                        bool fallback) const {
  const auto t = tables.find(table);
  if (t == tables.end()) return fallback;
  const auto v = t->second.find(key);
  if (v == t->second.end()) return fallback;
  if (std::holds_alternative<bool>(v->second)) {
    return std::get<bool>(v->second);
  }
  throw std::runtime_error("config key " + table + "." + key +
                           " is not a boolean");
}

std::string Document::get_string(const std::string& table,
                                 const std::string& key,
                                 const std::string& fallback) const {
  const auto t = tables.find(table);
  if (t == tables.end()) return fallback;
  const auto v = t->second.find(key);
  if (v == t->second.end()) return fallback;
  if (std::holds_alternative<std::string>(v->second)) {
    return std::get<std::string>(v->second);
  }
  throw std::runtime_error("config key " + table + "." + key +
                           " is not a string");
}

}  // namespace geomgate::minitoml
