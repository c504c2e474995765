// Copyright 2026 The curvepath Authors
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

#ifndef CURVEPATH__SRC__CSV_UTIL_HPP_
#define CURVEPATH__SRC__CSV_UTIL_HPP_

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "curvepath/errors.hpp"

namespace curvepath::detail
{

inline std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  return s;
}

inline std::vector<std::string_view> split(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

inline double parse_double(std::string_view field, std::size_t line, std::string_view name)
{
  double v = 0.0;
  const auto * first = field.data();
  if (!field.empty() && field.front() == '+') {
    ++first;
  }
  const auto res = std::from_chars(first, field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw ParseError("invalid number '" + std::string(field) + "' in column " + std::string(name),
            line);
  }
  return v;
}

inline std::int64_t parse_int(std::string_view field, std::size_t line)
{
  std::int64_t v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw ParseError("invalid cycle index '" + std::string(field) + "'", line);
  }
  return v;
}


}  // namespace curvepath::detail

#endif  // CURVEPATH__SRC__CSV_UTIL_HPP_
