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

#include "nfmap/experiment.hpp"

#include "nfmap/error.hpp"
#include "nfmap/metrics.hpp"
#include "nfmap/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace nfmap
{

namespace
{

struct MethodEntry
{
    Method method;
    const char *name;
};

constexpr MethodEntry kMethods[] = {
    {Method::rbf, "rbf"},
    {Method::rbf_noconst, "rbf_noconst"},
    {Method::rbf_gaussian, "rbf_gaussian"},
    {Method::rbf_tps, "rbf_tps"},
    {Method::rbf_mc_huber, "rbf_mc_huber"},
    {Method::rbf_mc_fixed, "rbf_mc_fixed"},
    {Method::mc_nnm, "mc_nnm"},
    {Method::lpr, "lpr"},
    {Method::lpr_mc, "lpr_mc"},
};

} // namespace

std::string method_name(Method m)
{
    for (const auto &e : kMethods)
        if (e.method == m)
            return e.name;
    throw std::invalid_argument("unknown method");
}

Method parse_method(const std::string &name)
{
    for (const auto &e : kMethods)
        if (name == e.name)
            return e.method;
    throw std::invalid_argument("unknown method '" + name + "'");
}

std::vector<Method> parse_methods(const std::string &name)
{
    if (name == "kernel_sweep")
        return {Method::rbf, Method::rbf_gaussian, Method::rbf_tps, Method::lpr};
    return {parse_method(name)};
}

Eigen::MatrixXd gaussian_tuned_map(const SampleMask &mask, const Eigen::MatrixXd &values, const GridSpec &grid,
                                   const std::vector<double> &epsilons, const RbfOptions &base)
{
    if (epsilons.empty())
        throw std::invalid_argument("gaussian_tuned_map: no shape candidates");
    RbfOptions opts = base;
    if (!opts.scale)
        opts.scale = RadialScale::grid_cells(grid);
    const std::vector<double> radii = grid.radii();

    Eigen::MatrixXd out(grid.n_theta, grid.n_r);
    for (std::size_t i = 0; i < grid.n_theta; ++i)
    {
        const SliceMeasurements meas = slice_measurements(mask, values, grid, i);
        std::optional<double> best_eps;
        double best = std::numeric_limits<double>::infinity();
        for (double eps : epsilons)
        {
            opts.kernel = RbfKernel::gaussian(eps);
            if (meas.radii.size() < 3)
            {
                best_eps = eps;
                break;
            }
            try
            {
                double mse = 0.0;
                for (double e : loocv_residuals(meas, opts))
                    mse += e * e;
                if (std::isfinite(mse) && mse < best)
                {
                    best = mse;
                    best_eps = eps;
                }
            }
            catch (const IllConditionedError &)
            {
                // candidate unusable for this slice
            }
        }
        if (!best_eps)
            throw IllConditionedError("slice " + std::to_string(i) + ": every Gaussian shape candidate is singular", i,
                                      std::numeric_limits<double>::infinity());
        opts.kernel = RbfKernel::gaussian(*best_eps);
        const RbfSliceModel model = fit_slice(meas, opts);
        for (std::size_t j = 0; j < grid.n_r; ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = evaluate(model, radii[j]);
    }
    return out;
}

namespace
{

Reconstruction complete_from_prior(Eigen::MatrixXd prior, double delta, std::optional<HuberResult> huber,
                                   const SolverConfig &solver)
{
    Reconstruction rec;
    rec.kind = "completion";
    rec.delta = delta;
    rec.huber = std::move(huber);
    CompletionResult res = solve_box_nnm(prior, delta, solver);
    rec.estimate = res.solution;
    rec.completion = std::move(res);
    return rec;
}

HuberResult huber_delta(const PooledResiduals &pooled, const HuberConfig &cfg)
{
    if (pooled.residuals.empty())
        throw DegenerateSliceError("no slice has enough samples for leave-one-out", 0);
    return select_delta(pooled.residuals, cfg);
}

} // namespace

Reconstruction reconstruct(Method method, const SampleMask &mask, const Eigen::MatrixXd &values,
                           const GridSpec &grid, const MethodOptions &options, std::optional<double> fixed_delta)
{
    Reconstruction rec;
    switch (method)
    {
    case Method::rbf:
        rec.kind = "rbf_prior";
        rec.estimate = interpolate_map(mask, values, grid, options.rbf);
        return rec;
    case Method::rbf_noconst:
    {
        RbfOptions o = options.rbf;
        o.constant_term = false;
        rec.kind = "rbf_prior";
        rec.estimate = interpolate_map(mask, values, grid, o);
        return rec;
    }
    case Method::rbf_gaussian:
        rec.kind = "rbf_prior";
        rec.estimate = gaussian_tuned_map(mask, values, grid, options.gaussian_epsilons, options.rbf);
        return rec;
    case Method::rbf_tps:
    {
        RbfOptions o = options.rbf;
        o.kernel = RbfKernel::thin_plate_spline();
        rec.kind = "rbf_prior";
        rec.estimate = interpolate_map(mask, values, grid, o);
        return rec;
    }
    case Method::rbf_mc_huber:
    {
        const HuberResult h = huber_delta(pooled_loocv_residuals(mask, values, grid, options.rbf), options.huber);
        return complete_from_prior(interpolate_map(mask, values, grid, options.rbf), h.center, h, options.solver);
    }
    case Method::rbf_mc_fixed:
        if (!fixed_delta)
            throw std::invalid_argument("rbf_mc_fixed needs a delta");
        return complete_from_prior(interpolate_map(mask, values, grid, options.rbf), *fixed_delta, std::nullopt,
                                   options.solver);
    case Method::mc_nnm:
    {
        rec.kind = "completion";
        CompletionResult res = solve_observed_nnm(mask, values, options.solver);
        rec.estimate = res.solution;
        rec.completion = std::move(res);
        return rec;
    }
    case Method::lpr:
        rec.kind = "lpr_prior";
        rec.estimate = lpr_map(mask, values, grid, options.lpr).prior;
        return rec;
    case Method::lpr_mc:
    {
        LprMapResult lpr = lpr_map(mask, values, grid, options.lpr);
        const HuberResult h = huber_delta(lpr.residuals, options.huber);
        return complete_from_prior(std::move(lpr.prior), h.center, h, options.solver);
    }
    }
    throw std::invalid_argument("unknown method");
}

void ExperimentConfig::validate() const
{
    scene.grid.validate();
    if (trials < 1)
        throw std::invalid_argument("experiment needs at least one trial");
    if (strategies.empty() || rhos.empty() || sigmas.empty() || methods.empty())
        throw std::invalid_argument("experiment sweep lists must be nonempty");
    for (double s : sigmas)
        if (!(s >= 0.0))
            throw std::invalid_argument("shadowing sigma must be nonnegative");
    for (double r : rhos)
        if (!(r > 0.0 && r <= 1.0))
            throw std::invalid_argument("sampling ratio must be in (0, 1]");
    const bool fixed = std::find(methods.begin(), methods.end(), Method::rbf_mc_fixed) != methods.end();
    if (fixed && deltas.empty())
        throw std::invalid_argument("rbf_mc_fixed needs a delta grid");
    for (double d : deltas)
        if (!(d >= 0.0))
            throw std::invalid_argument("delta values must be nonnegative");
}

std::uint64_t mask_seed(std::uint64_t map_seed)
{
    return derive_seed(map_seed, {0x6d61736bULL});
}

namespace
{

double elapsed(std::chrono::steady_clock::time_point since)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

// One method variant at a sweep point: a method, plus delta for rbf_mc_fixed.
struct Variant
{
    Method method;
    std::optional<double> delta;
};

} // namespace

std::vector<MetricsRecord> run_experiment(const ExperimentConfig &cfg)
{
    cfg.validate();
    const GridSpec &grid = cfg.scene.grid;
    const Eigen::MatrixXd clean = clean_map(grid, cfg.scene.geometry(),
                                            Beamformer::omnidirectional(cfg.scene.n_elements), cfg.scene.power);

    std::vector<Variant> variants;
    for (Method m : cfg.methods)
    {
        if (m == Method::rbf_mc_fixed)
            for (double d : cfg.deltas)
                variants.push_back({m, d});
        else
            variants.push_back({m, std::nullopt});
    }

    std::vector<MetricsRecord> records;
    std::size_t point_base = 0;
    for (const SamplingStrategy &strategy : cfg.strategies)
        for (double rho : cfg.rhos)
            for (double sigma : cfg.sigmas)
            {
                for (std::size_t t = 0; t < cfg.trials; ++t)
                {
                    const std::uint64_t seed = cfg.base_seed + t;
                    const Eigen::MatrixXd truth = add_shadowing(clean, sigma, seed);
                    std::optional<SampleMask> mask;
                    std::string mask_error;
                    try
                    {
                        mask = build_mask(grid, rho, strategy, mask_seed(seed));
                    }
                    catch (const std::exception &e)
                    {
                        mask_error = e.what();
                    }

                    for (std::size_t v = 0; v < variants.size(); ++v)
                    {
                        MetricsRecord rec;
                        rec.point = point_base + v;
                        rec.method = method_name(variants[v].method);
                        rec.strategy = strategy_name(strategy);
                        rec.rho = rho;
                        rec.sigma = sigma;
                        if (const auto *mu = std::get_if<MuLawSampling>(&strategy))
                            rec.mu = mu->mu;
                        rec.seed = seed;
                        if (variants[v].delta)
                            rec.delta = *variants[v].delta;

                        const auto start = std::chrono::steady_clock::now();
                        try
                        {
                            if (!mask)
                                throw std::invalid_argument(mask_error);
                            const Reconstruction out =
                                reconstruct(variants[v].method, *mask, truth, grid, cfg.options, variants[v].delta);
                            rec.nmse = nmse(truth, out.estimate);
                            rec.delta = out.delta;
                            if (out.completion)
                            {
                                rec.iterations = out.completion->iterations;
                                rec.converged = out.completion->converged;
                            }
                        }
                        catch (const std::exception &e)
                        {
                            rec.error = e.what();
                            rec.converged = false;
                        }
                        rec.wall_time = elapsed(start);
                        records.push_back(std::move(rec));
                    }
                }
                point_base += variants.size();
            }

    std::stable_sort(records.begin(), records.end(), [](const MetricsRecord &a, const MetricsRecord &b) {
        return a.point != b.point ? a.point < b.point : a.seed < b.seed;
    });
    if (std::all_of(records.begin(), records.end(), [](const MetricsRecord &r) { return !r.error.empty(); }))
        throw std::runtime_error("every trial failed; first error: " + records.front().error);
    return records;
}

std::vector<std::string> preset_names()
{
    return {"fig2b", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11"};
}

namespace
{

std::vector<double> linspace_step(double first, double last, double step)
{
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::llround((last - first) / step));
    for (std::size_t k = 0; k <= n; ++k)
        out.push_back(first + static_cast<double>(k) * step);
    return out;
}

} // namespace

ExperimentConfig preset(const std::string &name)
{
    ExperimentConfig cfg;
    cfg.name = name;
    const std::vector<Method> comparison{Method::rbf_mc_huber, Method::rbf, Method::mc_nnm, Method::lpr,
                                         Method::lpr_mc};
    if (name == "fig2b")
    {
        // Singular-value profile of the noise-free map; reconstruction is a
        // full-observation sanity run.
        cfg.rhos = {1.0};
        cfg.sigmas = {0.0};
        cfg.trials = 1;
    }
    else if (name == "fig5")
    {
        cfg.rhos = {0.05, 0.10, 0.15, 0.20};
        cfg.sigmas = {0.0};
        cfg.methods = parse_methods("kernel_sweep");
    }
    else if (name == "fig6")
    {
        cfg.rhos = linspace_step(0.10, 0.20, 0.02);
        cfg.sigmas = {0.0};
        cfg.methods = {Method::rbf, Method::rbf_noconst};
    }
    else if (name == "fig7")
    {
        cfg.strategies = {UniformSampling{}, MuLawSampling{15.0, std::nullopt, std::nullopt}};
        cfg.rhos = {0.1};
        cfg.sigmas = {1.0, 2.0, 3.0, 4.0};
        cfg.methods = {Method::rbf};
    }
    else if (name == "fig8")
    {
        cfg.rhos = {0.2};
        cfg.sigmas = {4.0};
        cfg.methods = {Method::rbf, Method::rbf_mc_huber, Method::rbf_mc_fixed};
        cfg.deltas = linspace_step(0.0, 8.0, 0.5);
    }
    else if (name == "fig9")
    {
        cfg.rhos = linspace_step(0.06, 0.16, 0.02);
        cfg.sigmas = {3.0};
        cfg.methods = comparison;
    }
    else if (name == "fig10")
    {
        cfg.rhos = {0.1};
        cfg.sigmas = {1.0, 2.0, 3.0, 4.0, 5.0};
        cfg.methods = comparison;
    }
    else if (name == "fig11")
    {
        cfg.rhos = {0.1};
        cfg.sigmas = {4.0};
        cfg.methods = comparison;
        cfg.trials = 1;
    }
    else
    {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
    return cfg;
}

} // namespace nfmap
