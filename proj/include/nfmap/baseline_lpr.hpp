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

#include "nfmap/lowrank.hpp"
#include "nfmap/rbf_interp.hpp"
#include "nfmap/robust_stats.hpp"

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace nfmap
{

struct LprConfig
{
    std::optional<double> bandwidth; // m; unset: per-slice leave-one-out choice
    std::vector<double> candidates{0.1, 0.2, 0.4, 0.8, 1.6};

    void validate() const;
};

struct LprPrediction
{
    double value = 0.0;
    double bandwidth = 0.0; // after any widening
    bool widened = false;
};

// Local linear fit a + b (r - query) with weights exp(-(r - query)^2 / (2 h^2)).
// When fewer than two samples carry weight above 1e-12, h is doubled until they do.
LprPrediction lpr_predict(const SliceMeasurements &meas, double query, double bandwidth);

// Resolves the bandwidth from cfg (or by leave-one-out) and predicts.
double lpr_predict(const SliceMeasurements &meas, double query, const LprConfig &cfg = {});

std::vector<double> lpr_loocv_residuals(const SliceMeasurements &meas, double bandwidth);

// Candidate with the smallest mean squared leave-one-out residual; ties keep
// the earlier candidate. Slices with K < 3 get the widest candidate.
double select_bandwidth(const SliceMeasurements &meas, const std::vector<double> &candidates);

struct LprMapResult
{
    Eigen::MatrixXd prior;
    std::vector<double> bandwidths; // per slice
    PooledResiduals residuals;      // at the chosen bandwidths
    std::size_t widened_cells = 0;
};

LprMapResult lpr_map(const SampleMask &mask, const Eigen::MatrixXd &values, const GridSpec &grid,
                     const LprConfig &cfg = {});

struct LprMcResult
{
    LprMapResult lpr;
    HuberResult delta;       // center is the tolerance used
    CompletionResult completion;
};

// LPR prior refined by box-constrained nuclear-norm completion. The tolerance
// is `delta` when given, otherwise the Huber center of the pooled LPR
// leave-one-out residuals.
LprMcResult lpr_mc(const SampleMask &mask, const Eigen::MatrixXd &values, const GridSpec &grid,
                   const LprConfig &lpr_cfg, std::optional<double> delta, const SolverConfig &solver_cfg = {},
                   const HuberConfig &huber_cfg = {});

} // namespace nfmap
