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

#include "nfmap/sampling.hpp"
#include "nfmap/sim_channel.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace nfmap
{

// Shape parameter used when none is given. Kernel distances on a grid are
// measured in radial cells (see RadialScale), where this value makes the
// multiquadric nearly linear beyond one cell.
inline constexpr double kDefaultEpsilon = 10.0;

enum class KernelType
{
    multiquadric,      // sqrt(1 + eps d^2)
    gaussian,          // exp(-eps d^2)
    thin_plate_spline, // d^2 log d, 0 at d = 0
};

struct RbfKernel
{
    KernelType type = KernelType::multiquadric;
    double epsilon = kDefaultEpsilon;

    double operator()(double distance) const;
    std::string name() const;

    static RbfKernel multiquadric(double epsilon = kDefaultEpsilon) { return {KernelType::multiquadric, epsilon}; }
    static RbfKernel gaussian(double epsilon) { return {KernelType::gaussian, epsilon}; }
    static RbfKernel thin_plate_spline() { return {KernelType::thin_plate_spline, 1.0}; }
};

double kernel_multiquadric(double distance, double epsilon);

// Affine map from meters to kernel coordinates: u = (r - origin) / unit.
struct RadialScale
{
    double origin = 0.0;
    double unit = 1.0;

    double operator()(double r) const { return (r - origin) / unit; }

    // One unit per radial grid cell, origin at r_min.
    static RadialScale grid_cells(const GridSpec &grid) { return {grid.r_min, grid.radial_step()}; }
};

struct RbfOptions
{
    RbfKernel kernel;
    // With the constant term the weights are constrained to sum to zero.
    bool constant_term = true;
    // Unset: meters for a lone slice, grid cells inside the map-level functions.
    std::optional<RadialScale> scale;
    // Fits whose bordered system has a larger condition estimate are rejected.
    double max_condition = 1e14;
};

struct SliceMeasurements
{
    std::size_t theta_index = 0;
    std::vector<double> radii; // m, strictly increasing
    std::vector<double> values; // dB
};

// rho(d) = sum_j lambda_j phi(|u(d) - u(r_j)|) + c
struct RbfSliceModel
{
    std::vector<double> centers; // m
    std::vector<double> lambda;
    double constant = 0.0;
    RbfKernel kernel;
    RadialScale scale;
    double condition = 1.0; // estimate for the solved system
};

// Solves [Phi 1; 1' 0] [lambda; c] = [gamma; 0] by LU with partial pivoting
// (or Phi lambda = gamma without the constant term).
// Throws std::invalid_argument for duplicate/unsorted radii or K < 2, and
// IllConditionedError when the condition estimate exceeds options.max_condition.
RbfSliceModel fit_slice(const SliceMeasurements &meas, const RbfOptions &options = {});

double evaluate(const RbfSliceModel &model, double d);

// Row i of the result is the slice-i model evaluated on every grid radius.
Eigen::MatrixXd interpolate_map(const SampleMask &mask, const Eigen::MatrixXd &values, const GridSpec &grid,
                                const RbfOptions &options = {});

// e_k = gamma_k - rho_{-k}(r_k), where rho_{-k} is refit without node k.
// Throws DegenerateSliceError when K < 3.
std::vector<double> loocv_residuals(const SliceMeasurements &meas, const RbfOptions &options = {});

struct PooledResiduals
{
    std::vector<double> residuals;
    std::vector<std::size_t> skipped_slices; // slices with K = 2
};

// Leave-one-out residuals of every slice in one list, in row order.
PooledResiduals pooled_loocv_residuals(const SampleMask &mask, const Eigen::MatrixXd &values,
                                       const GridSpec &grid, const RbfOptions &options = {});

// Observed radii and values of one angular row.
SliceMeasurements slice_measurements(const SampleMask &mask, const Eigen::MatrixXd &values, const GridSpec &grid,
                                     std::size_t row);

} // namespace nfmap
