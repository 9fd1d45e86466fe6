/*
 * Copyright 2026 The doubtset Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace doubtset::csv {

/// A parsed CSV: one header row plus rows of raw cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

Table read(const std::string& path);

std::vector<std::string> split(std::string_view line, char sep = ',');

double parse_double(std::string_view cell);
long long parse_int(std::string_view cell);

/// Shortest round-trip decimal representation; identical bytes on every run.
std::string format(double value);

/// Writes `content` atomically enough for our purposes (truncate + write).
void write_file(const std::string& path, const std::string& content);

}  // namespace doubtset::csv
