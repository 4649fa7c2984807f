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

#include "phasemeas/grid_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "phasemeas/errors.hpp"

namespace phasemeas::io {

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* ext) {
    return std::filesystem::path(stem.string() + ext);
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json grid_header(const PhaseGrid& grid) {
    nlohmann::json h;
    h["format"] = "phasemeas-grid";
    h["version"] = kGridFormatVersion;
    h["kind"] = to_string(grid.kind);
    h["extent"] = grid.extent;
    h["n_points"] = grid.n_points;
    h["spacing"] = grid.spacing();
    h["interpolated"] = grid.interpolated;
    h["columns"] = {"x", "y", "re", "im"};
    return h;
}

std::string grid_header_text(const PhaseGrid& grid) { return grid_header(grid).dump(2); }

PhaseGrid grid_from_header(const nlohmann::json& header) {
    try {
        if (header.at("format").get<std::string>() != "phasemeas-grid") {
            throw ConfigError("not a phasemeas grid header");
        }
        const int version = header.at("version").get<int>();
        if (version != kGridFormatVersion) {
            throw ConfigError("unsupported grid format version " + std::to_string(version));
        }
        PhaseGrid g;
        g.kind = grid_kind_from_string(header.at("kind").get<std::string>());
        g.extent = header.at("extent").get<double>();
        g.n_points = header.at("n_points").get<int>();
        g.interpolated = header.value("interpolated", false);
        GridSpec{g.extent, g.n_points}.validate();
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed grid header: ") + e.what());
    }
}

std::string grid_csv(const PhaseGrid& grid) {
    std::string out = "x,y,re,im\n";
    out.reserve(out.size() + static_cast<std::size_t>(grid.n_points) * grid.n_points * 96);
    for (int i = 0; i < grid.n_points; ++i) {
        for (int j = 0; j < grid.n_points; ++j) {
            const Complex v = grid.values(i, j);
            out += format_double(grid.coordinate(i));
            out += ',';
            out += format_double(grid.coordinate(j));
            out += ',';
            out += format_double(v.real());
            out += ',';
            out += format_double(v.imag());
            out += '\n';
        }
    }
    return out;
}

void write_grid(const PhaseGrid& grid, const std::filesystem::path& stem) {
    if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
    {
        std::ofstream json(with_suffix(stem, ".json"), std::ios::binary);
        if (!json) throw Error("cannot write " + with_suffix(stem, ".json").string());
        json << grid_header_text(grid) << '\n';
    }
    std::ofstream csv(with_suffix(stem, ".csv"), std::ios::binary);
    if (!csv) throw Error("cannot write " + with_suffix(stem, ".csv").string());
    csv << grid_csv(grid);
}

PhaseGrid read_grid(const std::filesystem::path& stem) {
    std::ifstream json(with_suffix(stem, ".json"));
    if (!json) throw ConfigError("cannot open " + with_suffix(stem, ".json").string());
    nlohmann::json header;
    try {
        json >> header;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed grid header: ") + e.what());
    }
    PhaseGrid grid = grid_from_header(header);
    grid.values.resize(grid.n_points, grid.n_points);

    std::ifstream csv(with_suffix(stem, ".csv"));
    if (!csv) throw ConfigError("cannot open " + with_suffix(stem, ".csv").string());
    std::string line;
    std::getline(csv, line);
    if (line != "x,y,re,im") throw ConfigError("unexpected grid CSV header '" + line + "'");
    for (int i = 0; i < grid.n_points; ++i) {
        for (int j = 0; j < grid.n_points; ++j) {
            if (!std::getline(csv, line)) throw ConfigError("grid CSV ends early");
            std::istringstream row(line);
            double x = 0, y = 0, re = 0, im = 0;
            char c1 = 0, c2 = 0, c3 = 0;
            row >> x >> c1 >> y >> c2 >> re >> c3 >> im;
            if (!row || c1 != ',' || c2 != ',' || c3 != ',') {
                throw ConfigError("malformed grid CSV row '" + line + "'");
            }
            grid.values(i, j) = Complex(re, im);
        }
    }
    return grid;
}

} // namespace phasemeas::io
