// Copyright 2026 The phasemeas Authors
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

// grid_io.hpp: on-disk form of a PhaseGrid.
//
// A grid is stored as two files sharing a stem:
//   <stem>.json  header {"format":"phasemeas-grid","version":1,"kind",...}
//   <stem>.csv   "x,y,re,im" then one row per sample, x-index outer,
//                numbers printed with 17 significant digits.

#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "phasemeas/phase_space.hpp"

namespace phasemeas::io {

inline constexpr int kGridFormatVersion = 1;

nlohmann::json grid_header(const PhaseGrid& grid);
/// Serialized header; parse + re-serialize reproduces it byte for byte.
std::string grid_header_text(const PhaseGrid& grid);
/// Header fields applied to an empty grid (values left unallocated).
PhaseGrid grid_from_header(const nlohmann::json& header);

std::string grid_csv(const PhaseGrid& grid);

/// Writes <stem>.json and <stem>.csv.
void write_grid(const PhaseGrid& grid, const std::filesystem::path& stem);
PhaseGrid read_grid(const std::filesystem::path& stem);

/// printf("%.17g") formatting used by every numeric output.
std::string format_double(double v);

} // namespace phasemeas::io
