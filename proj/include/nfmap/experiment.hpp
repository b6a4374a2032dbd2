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

#include "nfmap/baseline_lpr.hpp"
#include "nfmap/lowrank.hpp"
#include "nfmap/rbf_interp.hpp"
#include "nfmap/robust_stats.hpp"
#include "nfmap/sampling.hpp"
#include "nfmap/sim_channel.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace nfmap
{

enum class Method
{
    rbf,          // multiquadric with constant term
    rbf_noconst,  // multiquadric without constant term
    rbf_gaussian, // Gaussian kernel, shape chosen per slice by leave-one-out
    rbf_tps,      // thin-plate spline
    rbf_mc_huber, // RBF prior + box completion, delta from Huberized leave-one-out
    rbf_mc_fixed, // RBF prior + box completion, fixed delta
    mc_nnm,       // completion from the observed entries only
    lpr,          // local linear regression
    lpr_mc,       // LPR prior + box completion, delta from Huberized leave-one-out
};

std::string method_name(Method m);
Method parse_method(const std::string &name);

// Accepts a method name or "kernel_sweep" (rbf, rbf_gaussian, rbf_tps, lpr).
std::vector<Method> parse_methods(const std::string &name);

struct Scene
{
    GridSpec grid;
    std::size_t n_elements = 256;
    double carrier_freq = 100e9; // Hz
    double power = 1.0;          // W

    ArrayGeometry geometry() const { return ArrayGeometry::make(n_elements, carrier_freq); }
};

struct MethodOptions
{
    RbfOptions rbf;
    std::vector<double> gaussian_epsilons{0.5, 1.0, 2.0, 4.0}; // in kernel coordinates
    HuberConfig huber;
    SolverConfig solver;
    LprConfig lpr;
};

struct Reconstruction
{
    Eigen::MatrixXd estimate;
    std::string kind; // rbf_prior, lpr_prior or completion
    double delta = std::numeric_limits<double>::quiet_NaN();
    std::optional<HuberResult> huber;
    std::optional<CompletionResult> completion;
};

// Gaussian-kernel map with the shape parameter of each slice picked from
// `epsilons` by mean squared leave-one-out residual.
Eigen::MatrixXd gaussian_tuned_map(const SampleMask &mask, const Eigen::MatrixXd &values, const GridSpec &grid,
                                   const std::vector<double> &epsilons, const RbfOptions &base = {});

// Runs one method end to end. `fixed_delta` is required for rbf_mc_fixed and
// ignored otherwise.
Reconstruction reconstruct(Method method, const SampleMask &mask, const Eigen::MatrixXd &values,
                           const GridSpec &grid, const MethodOptions &options = {},
                           std::optional<double> fixed_delta = {});

struct ExperimentConfig
{
    std::string name = "custom";
    Scene scene;
    std::vector<SamplingStrategy> strategies{UniformSampling{}};
    std::vector<double> rhos{0.1};
    std::vector<double> sigmas{0.0};
    std::vector<Method> methods{Method::rbf};
    std::vector<double> deltas; // used by rbf_mc_fixed
    std::size_t trials = 20;
    std::uint64_t base_seed = 1;
    MethodOptions options;

    void validate() const;
};

struct MetricsRecord
{
    std::size_t point = 0; // sweep point index
    std::string method;
    std::string strategy;
    double rho = 0.0;
    double sigma = 0.0;
    double mu = std::numeric_limits<double>::quiet_NaN(); // mu-law only
    std::uint64_t seed = 0;
    double nmse = std::numeric_limits<double>::quiet_NaN();
    double wall_time = 0.0; // s
    double delta = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    bool converged = true;
    std::string error; // empty on success
};

// Trial t uses the map seed base_seed + t; every method at a sweep point sees
// the same map and mask. Records are ordered by (point, seed). A failing method
// produces a record with `error` set; the run throws only if every record failed.
std::vector<MetricsRecord> run_experiment(const ExperimentConfig &cfg);

// Mask seed used for the map seed of a trial.
std::uint64_t mask_seed(std::uint64_t map_seed);

std::vector<std::string> preset_names();

// fig2b, fig5 ... fig11. Throws std::invalid_argument for unknown names.
ExperimentConfig preset(const std::string &name);

} // namespace nfmap
