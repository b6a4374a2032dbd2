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

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace nfmap
{

// Singular-value threshold is penalty * RMS(data), so the solver commutes with
// a global rescaling of the data.
inline constexpr double kDefaultPenalty = 0.1;

struct SolverConfig
{
    int max_iters = 2000;
    double rel_change_tol = 1e-5;           // on ||Z_{t+1} - Z_t||_F / ||Z_t||_F
    std::optional<double> feasibility_tol;  // unset: 1e-6 * (1 + max|data|)
    double penalty = kDefaultPenalty;
    bool keep_trace = true;

    void validate() const;
};

struct CompletionResult
{
    Eigen::MatrixXd solution;
    int iterations = 0;
    double final_nuclear_norm = 0.0;
    // Box mode: max |Z - prior| - delta of the last iterate before the final
    // projection. Equality mode: max |Z - observed| over the mask.
    double max_violation = 0.0;
    bool converged = false;
    double threshold = 0.0;           // singular-value threshold used
    std::vector<double> merit_trace;  // fixed-point residual ||W - Z||_F per iteration
};

Eigen::VectorXd singular_values(const Eigen::MatrixXd &m);

// Sum of singular values. Throws std::invalid_argument on non-finite input.
double nuclear_norm(const Eigen::MatrixXd &m);

// U max(S - tau, 0) V'.
Eigen::MatrixXd sv_threshold(const Eigen::MatrixXd &m, double tau);

// min ||Z||_* subject to |Z_ij - prior_ij| <= delta, by Douglas-Rachford splitting.
CompletionResult solve_box_nnm(const Eigen::MatrixXd &prior, double delta, const SolverConfig &cfg = {});

// min ||Z||_* subject to Z_ij = values_ij on the mask. Only masked entries of
// values are read; the shape comes from the mask.
CompletionResult solve_observed_nnm(const SampleMask &mask, const Eigen::MatrixXd &values,
                                    const SolverConfig &cfg = {});

} // namespace nfmap
