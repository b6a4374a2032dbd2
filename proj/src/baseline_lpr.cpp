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

#include "nfmap/baseline_lpr.hpp"

#include "nfmap/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nfmap
{

void LprConfig::validate() const
{
    if (bandwidth)
    {
        if (!(*bandwidth > 0.0))
            throw std::invalid_argument("LPR bandwidth must be positive");
        return;
    }
    if (candidates.empty())
        throw std::invalid_argument("LPR bandwidth candidate list is empty");
    for (double h : candidates)
        if (!(h > 0.0))
            throw std::invalid_argument("LPR bandwidth candidates must be positive");
}

namespace
{

void check_slice(const SliceMeasurements &meas)
{
    if (meas.radii.size() != meas.values.size())
        throw std::invalid_argument("LPR: radii and values differ in length");
    if (meas.radii.size() < 2)
        throw std::invalid_argument("LPR: need at least 2 samples");
}

} // namespace

LprPrediction lpr_predict(const SliceMeasurements &meas, double query, double bandwidth)
{
    check_slice(meas);
    if (!(bandwidth > 0.0))
        throw std::invalid_argument("LPR bandwidth must be positive");

    LprPrediction out;
    double h = bandwidth;
    const std::size_t k = meas.radii.size();
    std::vector<double> w(k);
    for (;;)
    {
        std::size_t active = 0;
        for (std::size_t a = 0; a < k; ++a)
        {
            const double x = meas.radii[a] - query;
            w[a] = std::exp(-x * x / (2.0 * h * h));
            active += w[a] > 1e-12 ? 1 : 0;
        }
        if (active >= 2)
            break;
        h *= 2.0;
        out.widened = true;
    }
    out.bandwidth = h;

    // Weighted least squares in centered form: slope from weighted
    // covariances, then the line evaluated at the query.
    double s0 = 0.0, xm = 0.0, ym = 0.0;
    for (std::size_t a = 0; a < k; ++a)
    {
        s0 += w[a];
        xm += w[a] * (meas.radii[a] - query);
        ym += w[a] * meas.values[a];
    }
    xm /= s0;
    ym /= s0;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t a = 0; a < k; ++a)
    {
        const double dx = meas.radii[a] - query - xm;
        sxx += w[a] * dx * dx;
        sxy += w[a] * dx * (meas.values[a] - ym);
    }
    double spread = 0.0;
    for (std::size_t a = 0; a < k; ++a)
        spread = std::max(spread, std::abs(meas.radii[a] - query - xm));
    if (!(sxx > std::numeric_limits<double>::epsilon() * s0 * spread * spread))
        throw std::invalid_argument("LPR: singular local system (duplicate radii?)");
    out.value = ym - (sxy / sxx) * xm;
    return out;
}

std::vector<double> lpr_loocv_residuals(const SliceMeasurements &meas, double bandwidth)
{
    check_slice(meas);
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
        residuals[out] = meas.values[out] - lpr_predict(reduced, meas.radii[out], bandwidth).value;
    }
    return residuals;
}

double select_bandwidth(const SliceMeasurements &meas, const std::vector<double> &candidates)
{
    if (candidates.empty())
        throw std::invalid_argument("LPR bandwidth candidate list is empty");
    if (meas.radii.size() < 3)
        return *std::max_element(candidates.begin(), candidates.end());

    double best_h = candidates.front();
    double best = std::numeric_limits<double>::infinity();
    for (double h : candidates)
    {
        const auto e = lpr_loocv_residuals(meas, h);
        double mse = 0.0;
        for (double v : e)
            mse += v * v;
        mse /= static_cast<double>(e.size());
        if (mse < best)
        {
            best = mse;
            best_h = h;
        }
    }
    return best_h;
}

double lpr_predict(const SliceMeasurements &meas, double query, const LprConfig &cfg)
{
    cfg.validate();
    const double h = cfg.bandwidth ? *cfg.bandwidth : select_bandwidth(meas, cfg.candidates);
    return lpr_predict(meas, query, h).value;
}

LprMapResult lpr_map(const SampleMask &mask, const Eigen::MatrixXd &values, const GridSpec &grid,
                     const LprConfig &cfg)
{
    cfg.validate();
    grid.validate();
    mask.validate();
    if (mask.n_theta != grid.n_theta || mask.n_r != grid.n_r)
        throw std::invalid_argument("mask shape does not match the grid");
    if (values.rows() != static_cast<Eigen::Index>(grid.n_theta) || values.cols() != static_cast<Eigen::Index>(grid.n_r))
        throw std::invalid_argument("value matrix shape does not match the grid");

    LprMapResult res;
    res.prior.resize(grid.n_theta, grid.n_r);
    res.bandwidths.resize(grid.n_theta);
    const std::vector<double> radii = grid.radii();
    for (std::size_t i = 0; i < grid.n_theta; ++i)
    {
        const SliceMeasurements meas = slice_measurements(mask, values, grid, i);
        const double h = cfg.bandwidth ? *cfg.bandwidth : select_bandwidth(meas, cfg.candidates);
        res.bandwidths[i] = h;
        for (std::size_t j = 0; j < grid.n_r; ++j)
        {
            const LprPrediction p = lpr_predict(meas, radii[j], h);
            res.prior(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p.value;
            res.widened_cells += p.widened ? 1 : 0;
        }
        if (meas.radii.size() < 3)
        {
            res.residuals.skipped_slices.push_back(i);
            continue;
        }
        const auto e = lpr_loocv_residuals(meas, h);
        res.residuals.residuals.insert(res.residuals.residuals.end(), e.begin(), e.end());
    }
    return res;
}

LprMcResult lpr_mc(const SampleMask &mask, const Eigen::MatrixXd &values, const GridSpec &grid,
                   const LprConfig &lpr_cfg, std::optional<double> delta, const SolverConfig &solver_cfg,
                   const HuberConfig &huber_cfg)
{
    LprMcResult res;
    res.lpr = lpr_map(mask, values, grid, lpr_cfg);
    if (delta)
    {
        if (!(*delta >= 0.0))
            throw std::invalid_argument("lpr_mc: delta must be nonnegative");
        res.delta.center = *delta;
        res.delta.converged = true;
    }
    else
    {
        if (res.lpr.residuals.residuals.empty())
            throw DegenerateSliceError("lpr_mc: no slice has enough samples for leave-one-out", 0);
        res.delta = select_delta(res.lpr.residuals.residuals, huber_cfg);
    }
    res.completion = solve_box_nnm(res.lpr.prior, res.delta.center, solver_cfg);
    return res;
}

} // namespace nfmap
