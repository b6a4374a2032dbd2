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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace nfmap
{

inline constexpr double kSpeedOfLight = 2.99792458e8; // m/s

// Cells whose linear RSS falls below kNullPowerFloor are written as kNullFloorDb.
inline constexpr double kNullPowerFloor = 1e-300;
inline constexpr double kNullFloorDb = -400.0;

// Uniform linear array centred at the origin along the y-axis. Element n sits at
// (0, offset_n * wavelength / 2) with offset_n = (2n - N - 1) / 2, n = 1..N.
struct ArrayGeometry
{
    std::size_t n_elements = 0;
    double carrier_freq = 0.0; // Hz
    double wavelength = 0.0;   // m
    std::vector<double> element_offsets;

    static ArrayGeometry make(std::size_t n_elements, double carrier_freq_hz);
};

// Transmit beamforming weights with unit Euclidean norm.
struct Beamformer
{
    std::vector<std::complex<double>> weights;

    // All entries 1/sqrt(N).
    static Beamformer omnidirectional(std::size_t n_elements);

    // Throws std::invalid_argument unless ||weights||_2 = 1 within 1e-12.
    static Beamformer from_weights(std::vector<std::complex<double>> weights);
};

// Angular-radial grid. Cell (i, j) is at theta_i (degrees) and r_j (meters),
// both uniformly spaced and including the end points.
struct GridSpec
{
    double theta_min = -80.0; // deg
    double theta_max = 80.0;  // deg
    double r_min = 0.1;       // m
    double r_max = 10.0;      // m
    std::size_t n_theta = 100;
    std::size_t n_r = 100;

    void validate() const;
    double theta_deg(std::size_t i) const;
    double radius(std::size_t j) const;
    double radial_step() const { return (r_max - r_min) / static_cast<double>(n_r - 1); }
    std::vector<double> radii() const;

    bool operator==(const GridSpec &) const = default;
};

// RSS radio map in dB; rows are angles, columns are radii.
struct RadioMap
{
    GridSpec grid;
    Eigen::MatrixXd values;
    std::uint64_t seed = 0;
    double sigma_shadow = 0.0; // dB
};

struct SensitivityBounds
{
    double angular = 0.0; // bound on |d|S|/d theta|, per radian
    double radial = 0.0;  // bound on |d|S|/d d|, per meter
};

// Offsets (2n - N - 1) / 2 for n = 1..N. Throws on N = 0.
std::vector<double> element_offsets(std::size_t n_elements);

// Distance from the receiver at (d, theta) to an element with offset delta_n:
// sqrt(d^2 + delta_n^2 lambda^2 / 4 - d cos(theta) delta_n lambda).
double element_distance(double d, double theta_deg, double delta_n, double wavelength);

// Near-field array factor S(d, theta) = lambda / (4 pi d) * sum_n v_n exp(-j 2 pi d_n / lambda).
std::complex<double> array_factor(double d, double theta_deg, const ArrayGeometry &geom,
                                  const Beamformer &bf);

// Received signal strength in dB for a unit-power symbol:
// 10 log10 |sqrt(P / N) S(d, theta)|^2 + shadow_db. Returns -infinity when the
// array factor cancels exactly.
double rss_db(double d, double theta_deg, const ArrayGeometry &geom, const Beamformer &bf,
              double power, double shadow_db = 0.0);

// Noise-free RSS map (sigma = 0) with nulls clamped to kNullFloorDb.
Eigen::MatrixXd clean_map(const GridSpec &grid, const ArrayGeometry &geom, const Beamformer &bf,
                          double power);

// Adds i.i.d. N(0, sigma^2) shadowing; cell (i, j) draws from the stream
// derive_seed(seed, {i, j}) so the result does not depend on traversal order.
Eigen::MatrixXd add_shadowing(const Eigen::MatrixXd &clean, double sigma, std::uint64_t seed);

RadioMap generate_map(const GridSpec &grid, const ArrayGeometry &geom, const Beamformer &bf,
                      double power, double sigma, std::uint64_t seed);

// Envelopes of the angular and radial derivative of |S| with the phase
// alignment factor set to one: 5 lambda |sin theta| N^2 / (16 d_min) and
// (lambda / (4 pi d^2) + 1 / (2 d)) N, where d_min is the smallest
// element-to-receiver distance.
SensitivityBounds sensitivity_bounds(double d, double theta_deg, const ArrayGeometry &geom);

inline double deg_to_rad(double deg) { return deg * 0.017453292519943295; }

} // namespace nfmap
