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

#include "nfmap/sim_channel.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nfmap
{

struct MuLawParams
{
    double mu = 15.0;
    double z0 = 0.0; // m
    double z1 = 1.0; // m

    void validate() const;
};

struct UniformSampling
{
};

// Inverse mu-law radii; z0/z1 default to the grid's r_min/r_max.
struct MuLawSampling
{
    double mu = 15.0;
    std::optional<double> z0;
    std::optional<double> z1;
};

using SamplingStrategy = std::variant<UniformSampling, MuLawSampling>;

std::string strategy_name(const SamplingStrategy &strategy);

// Observed index set. per_angle[i] holds the sorted radial indices sampled on
// angular row i; every row has the same count K.
struct SampleMask
{
    std::size_t n_theta = 0;
    std::size_t n_r = 0;
    double target_ratio = 0.0;
    std::vector<std::vector<std::size_t>> per_angle;

    std::size_t size() const;
    bool contains(std::size_t i, std::size_t j) const;
    std::vector<std::pair<std::size_t, std::size_t>> entries() const;

    // Throws std::invalid_argument when indices are out of range, unsorted or duplicated.
    void validate() const;
};

// F(x) = ln(1 + mu x) / ln(1 + mu) on [0, 1].
double mu_law_forward(double x, double mu);

// F^{-1}(y) = ((1 + mu)^y - 1) / mu on [0, 1].
double mu_law_inverse(double y, double mu);

// K radii z0 + F^{-1}(u_k) (z1 - z0) with u_k ~ U(0, 1) drawn from Rng(seed).
std::vector<double> draw_nonuniform_radii(std::size_t count, const MuLawParams &params, std::uint64_t seed);

// K = round(ratio * n_r) distinct radial indices per angular row. Row i uses
// the sub-stream derive_seed(seed, {i}). Mu-law radii are snapped to the
// nearest grid index; collisions are redrawn up to 10 K times, after which the
// cells farthest from the chosen set are added.
SampleMask build_mask(const GridSpec &grid, double ratio, const SamplingStrategy &strategy, std::uint64_t seed);

// Fill distance of sorted points on [a, b]:
// max(r_1 - a, b - r_K, max_i (r_{i+1} - r_i) / 2).
double fill_distance(const std::vector<double> &points, double a, double b);

} // namespace nfmap
