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

#include "nfmap/rbf_interp.hpp"

#include "nfmap/error.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

namespace nfmap
{

double kernel_multiquadric(double distance, double epsilon)
{
    return std::sqrt(1.0 + epsilon * distance * distance);
}

double RbfKernel::operator()(double distance) const
{
    switch (type)
    {
    case KernelType::multiquadric:
        return kernel_multiquadric(distance, epsilon);
    case KernelType::gaussian:
        return std::exp(-epsilon * distance * distance);
    case KernelType::thin_plate_spline:
    {
        const double d = std::abs(distance);
        return d > 0.0 ? d * d * std::log(d) : 0.0;
    }
    }
    return 0.0;
}

std::string RbfKernel::name() const
{
    switch (type)
    {
    case KernelType::multiquadric:
        return "multiquadric";
    case KernelType::gaussian:
        return "gaussian";
    case KernelType::thin_plate_spline:
        return "tps";
    }
    return "unknown";
}

namespace
{

void check_slice(const SliceMeasurements &meas, std::size_t min_nodes)
{
    if (meas.radii.size() != meas.values.size())
        throw std::invalid_argument("slice " + std::to_string(meas.theta_index) + ": radii and values differ in length");
    if (meas.radii.size() < min_nodes)
        throw std::invalid_argument("slice " + std::to_string(meas.theta_index) + ": need at least " +
                                    std::to_string(min_nodes) + " samples");
    for (std::size_t k = 1; k < meas.radii.size(); ++k)
    {
        if (meas.radii[k] == meas.radii[k - 1])
            throw std::invalid_argument("slice " + std::to_string(meas.theta_index) + ": duplicate radius");
        if (meas.radii[k] < meas.radii[k - 1])
            throw std::invalid_argument("slice " + std::to_string(meas.theta_index) + ": radii must be increasing");
    }
}

} // namespace

RbfSliceModel fit_slice(const SliceMeasurements &meas, const RbfOptions &options)
{
    check_slice(meas, 2);
    const auto k = static_cast<Eigen::Index>(meas.radii.size());

    RbfSliceModel model;
    model.centers = meas.radii;
    model.kernel = options.kernel;
    model.scale = options.scale.value_or(RadialScale{});

    std::vector<double> u(meas.radii.size());
    for (std::size_t a = 0; a < u.size(); ++a)
        u[a] = model.scale(meas.radii[a]);

    const Eigen::Index n = options.constant_term ? k + 1 : k;
    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (Eigen::Index a = 0; a < k; ++a)
    {
        for (Eigen::Index b = 0; b < k; ++b)
            system(a, b) = options.kernel(std::abs(u[a] - u[b]));
        rhs(a) = meas.values[a];
    }
    if (options.constant_term)
    {
        system.col(k).head(k).setOnes();
        system.row(k).head(k).setOnes();
    }

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    const double rcond = lu.rcond();
    model.condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(model.condition <= options.max_condition))
        throw IllConditionedError("slice " + std::to_string(meas.theta_index) +
                                      ": RBF system is numerically singular (condition estimate " +
                                      std::to_string(model.condition) + ")",
                                  meas.theta_index, model.condition);

    // Two steps of iterative refinement recover the digits partial pivoting
    // loses on the poorly conditioned systems dense samples produce.
    Eigen::VectorXd sol = lu.solve(rhs);
    for (int step = 0; step < 2; ++step)
        sol += lu.solve(rhs - system * sol);
    model.lambda.assign(sol.data(), sol.data() + k);
    model.constant = options.constant_term ? sol(k) : 0.0;
    return model;
}

double evaluate(const RbfSliceModel &model, double d)
{
    const double u = model.scale(d);
    double acc = model.constant;
    for (std::size_t j = 0; j < model.centers.size(); ++j)
        acc += model.lambda[j] * model.kernel(std::abs(u - model.scale(model.centers[j])));
    return acc;
}

SliceMeasurements slice_measurements(const SampleMask &mask, const Eigen::MatrixXd &values, const GridSpec &grid,
                                     std::size_t row)
{
    SliceMeasurements meas;
    meas.theta_index = row;
    for (std::size_t j : mask.per_angle.at(row))
    {
        meas.radii.push_back(grid.radius(j));
        meas.values.push_back(values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)));
    }
    return meas;
}

namespace
{

void check_map_inputs(const SampleMask &mask, const Eigen::MatrixXd &values, const GridSpec &grid)
{
    grid.validate();
    mask.validate();
    if (mask.n_theta != grid.n_theta || mask.n_r != grid.n_r)
        throw std::invalid_argument("mask shape does not match the grid");
    if (values.rows() != static_cast<Eigen::Index>(grid.n_theta) || values.cols() != static_cast<Eigen::Index>(grid.n_r))
        throw std::invalid_argument("value matrix shape does not match the grid");
}

RbfOptions with_grid_scale(const RbfOptions &options, const GridSpec &grid)
{
    RbfOptions out = options;
    if (!out.scale)
        out.scale = RadialScale::grid_cells(grid);
    return out;
}

} // namespace

Eigen::MatrixXd interpolate_map(const SampleMask &mask, const Eigen::MatrixXd &values, const GridSpec &grid,
                                const RbfOptions &options)
{
    check_map_inputs(mask, values, grid);
    const RbfOptions opts = with_grid_scale(options, grid);
    const std::vector<double> radii = grid.radii();

    Eigen::MatrixXd prior(grid.n_theta, grid.n_r);
    for (std::size_t i = 0; i < grid.n_theta; ++i)
    {
        const RbfSliceModel model = fit_slice(slice_measurements(mask, values, grid, i), opts);
        for (std::size_t j = 0; j < grid.n_r; ++j)
            prior(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = evaluate(model, radii[j]);
    }
    return prior;
}

std::vector<double> loocv_residuals(const SliceMeasurements &meas, const RbfOptions &options)
{
    check_slice(meas, 2);
    const std::size_t k = meas.radii.size();
    if (k < 3)
        throw DegenerateSliceError("slice " + std::to_string(meas.theta_index) +
                                       ": leave-one-out needs at least 3 samples",
                                   meas.theta_index);

    std::vector<double> residuals(k);
    SliceMeasurements reduced;
    reduced.theta_index = meas.theta_index;
    for (std::size_t out = 0; out < k; ++out)
    {
        reduced.radii.clear();
        reduced.values.clear();
        for (std::size_t a = 0; a < k; ++a)
        {
            if (a == out)
                continue;
            reduced.radii.push_back(meas.radii[a]);
            reduced.values.push_back(meas.values[a]);
        }
        const RbfSliceModel model = fit_slice(reduced, options);
        residuals[out] = meas.values[out] - evaluate(model, meas.radii[out]);
    }
    return residuals;
}

PooledResiduals pooled_loocv_residuals(const SampleMask &mask, const Eigen::MatrixXd &values, const GridSpec &grid,
                                       const RbfOptions &options)
{
    check_map_inputs(mask, values, grid);
    const RbfOptions opts = with_grid_scale(options, grid);
    PooledResiduals pooled;
    for (std::size_t i = 0; i < grid.n_theta; ++i)
    {
        if (mask.per_angle[i].size() < 3)
        {
            pooled.skipped_slices.push_back(i);
            continue;
        }
        const auto e = loocv_residuals(slice_measurements(mask, values, grid, i), opts);
        pooled.residuals.insert(pooled.residuals.end(), e.begin(), e.end());
    }
    return pooled;
}

} // namespace nfmap
