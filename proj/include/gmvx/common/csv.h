/*
 * Copyright 2026 The gmvx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GMVX_COMMON_CSV_H_
#define GMVX_COMMON_CSV_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gmvx {

struct CsvTable {
  std::vector<std::string> header;
  // Data rows; rows[i] has header.size() cells.
  std::vector<std::vector<std::string>> rows;
};

// Splits one CSV record. Handles double-quoted fields with "" escapes.
std::vector<std::string> SplitCsvLine(std::string_view line);

// Parses CSV text with a header row. Blank lines are skipped. A data row
// with a different cell count than the header is a parse error.
CsvTable ParseCsv(std::string_view text);
CsvTable ReadCsvFile(const std::string& path);

// Strict number parsing: the whole (trimmed) cell must be a finite or
// non-finite double. Empty cells and "NA"/"nan" return NaN.
std::optional<double> ParseCsvNumber(std::string_view cell);

// Shortest decimal text that parses back to exactly the same double.
std::string FormatDouble(double value);

// Fixed-precision text for human-facing tables and SVG coordinates.
std::string FormatFixed(double value, int decimals);

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, std::string_view contents);

// 64-bit FNV-1a, used for input checksums in run manifests.
std::uint64_t Fnv1a64(std::string_view bytes);
std::string HexU64(std::uint64_t value);

}  // namespace gmvx

#endif  // GMVX_COMMON_CSV_H_
