// SPDX-License-Identifier: Apache-2.0
//
// nfmap: near-field XL-MIMO radio map reconstruction
// Copyright (C) 2026 The nfmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "nfmap/experiment.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace nfmap
{

// Matrices: one CSV line per angular row, values with `precision` significant digits.
void write_matrix_csv(const std::filesystem::path &path, const Eigen::MatrixXd &m, int precision = 12);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path &path);

// map.csv -> map.json
std::filesystem::path sidecar_path(const std::filesystem::path &csv);

void write_json(const std::filesystem::path &path, const nlohmann::json &j);
nlohmann::json read_json(const std::filesystem::path &path);

nlohmann::json grid_to_json(const GridSpec &grid);
GridSpec grid_from_json(const nlohmann::json &j);

// Missing keys keep their defaults.
nlohmann::json scene_to_json(const Scene &scene);
Scene scene_from_json(const nlohmann::json &j);

// Matrix CSV plus a sidecar tagged kind = "radio_map".
void write_radio_map(const std::filesystem::path &path, const RadioMap &map, const Scene &scene);

// Matrix CSV plus a sidecar with the given kind and extra fields.
void write_tagged_matrix(const std::filesystem::path &path, const Eigen::MatrixXd &m, const std::string &kind,
                         const GridSpec &grid, const nlohmann::json &extra = nlohmann::json::object());

struct MatrixFile
{
    Eigen::MatrixXd values;
    nlohmann::json meta; // empty object when there is no sidecar
    GridSpec grid;       // from the sidecar, else the default grid resized to the matrix
};

MatrixFile read_tagged_matrix(const std::filesystem::path &path);

// Mask CSV with header "i,j,value" and a sidecar (kind = "mask") holding the
// shape, ratio, strategy, mu and seed.
void write_mask(const std::filesystem::path &path, const SampleMask &mask, const Eigen::MatrixXd &values,
                const SamplingStrategy &strategy, std::uint64_t seed);

struct MaskFile
{
    SampleMask mask;
    Eigen::MatrixXd values; // NaN outside the mask
    nlohmann::json meta;
};

MaskFile read_mask(const std::filesystem::path &path);

nlohmann::json huber_to_json(const HuberResult &h);
nlohmann::json completion_to_json(const CompletionResult &c, bool with_trace = false);

// Records CSV; doubles use 17 significant digits so a read returns the same values.
void write_records(std::ostream &os, const std::vector<MetricsRecord> &records);
void write_records(const std::filesystem::path &path, const std::vector<MetricsRecord> &records);
std::vector<MetricsRecord> read_records(std::istream &is);
std::vector<MetricsRecord> read_records(const std::filesystem::path &path);

} // namespace nfmap
