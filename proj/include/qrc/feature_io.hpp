// Copyright 2026 The qrcsim Authors
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

// CSV I/O. Files are UTF-8 with LF line endings; reals are written with 17
// significant digits so a write/read cycle is exact.

#include "qrc/reservoir.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qrc {

/// Shortest-round-trip-safe decimal text for a double.
std::string format_real(double x);
double parse_real(std::string_view text);

void write_feature_csv(std::ostream& out, const FeatureMatrix& features);
void write_feature_csv(const std::filesystem::path& path, const FeatureMatrix& features);
FeatureMatrix read_feature_csv(std::istream& in);
FeatureMatrix read_feature_csv(const std::filesystem::path& path);

/// Header plus string cells; no quoting (fields never contain commas).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of `name` in the header; throws when missing.
    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace qrc
