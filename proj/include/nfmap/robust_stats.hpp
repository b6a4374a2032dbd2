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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nfmap
{

// Huber penalty: r^2/2 inside the threshold, linear outside.
double huber_loss(double r, double threshold);

// Sum of huber_loss(v - center) over the data.
double huber_objective(std::span<const double> values, double center, double threshold);

double median(std::span<const double> values);

// Median absolute deviation from the median (unscaled).
double mad(std::span<const double> values);

struct HuberConfig
{
    std::optional<double> threshold; // unset: MAD of the data
    int max_iters = 100;
    double tol = 1e-8;

    void validate() const;
};

struct HuberResult
{
    double center = 0.0;
    double threshold = 0.0; // resolved value
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace; // after each update, starting with the median
};

// Threshold actually used for the data: cfg.threshold, or the MAD with a floor
// of 1e-6 + 1.4826 * mean absolute deviation when the MAD vanishes.
double resolve_threshold(std::span<const double> values, const HuberConfig &cfg);

// IRLS for the Huber location estimate, started at the median.
// Non-convergence is reported through HuberResult::converged.
HuberResult huber_estimate(std::span<const double> values, const HuberConfig &cfg = {});

// Tolerance from pooled leave-one-out residuals: the Huber center of |e_k|.
HuberResult select_delta(std::span<const double> pooled_residuals, const HuberConfig &cfg = {});

} // namespace nfmap
