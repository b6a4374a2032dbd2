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

// Command-line front end: generate, sample, reconstruct, evaluate, experiment.
// Exit codes: 0 success, 1 runtime failure, 2 invalid arguments,
// 3 solver non-convergence with --strict.

#include "nfmap/experiment.hpp"
#include "nfmap/metrics.hpp"
#include "nfmap/persistence.hpp"
#include "nfmap/sampling.hpp"
#include "nfmap/sim_channel.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace nfmap;
namespace fs = std::filesystem;

namespace
{

constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNotConverged = 3;

struct GenerateArgs
{
    std::string config;
    std::string out;
    std::optional<double> sigma;
    std::optional<std::uint64_t> seed;
};

struct SampleArgs
{
    std::string map;
    std::string out;
    double rho = 0.1;
    std::string strategy = "uniform";
    double mu = 15.0;
    std::uint64_t seed = 1;
};

struct ReconstructArgs
{
    std::string method;
    std::string map;
    std::string mask;
    std::string out;
    std::optional<double> delta;
    bool strict = false;
};

struct EvaluateArgs
{
    std::string truth;
    std::string estimate;
};

struct ExperimentArgs
{
    std::string preset;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::string out;
};

int run_generate(const GenerateArgs &a)
{
    const nlohmann::json cfg = a.config.empty() ? nlohmann::json::object() : read_json(a.config);
    const Scene scene = scene_from_json(cfg);
    const double sigma = a.sigma ? *a.sigma : cfg.value("sigma_db", 0.0);
    const std::uint64_t seed = a.seed ? *a.seed : cfg.value("seed", std::uint64_t{1});
    if (!(sigma >= 0.0))
        throw std::invalid_argument("sigma must be nonnegative");
    const RadioMap map = generate_map(scene.grid, scene.geometry(), Beamformer::omnidirectional(scene.n_elements),
                                      scene.power, sigma, seed);
    write_radio_map(a.out, map, scene);
    return 0;
}

SamplingStrategy make_strategy(const std::string &name, double mu)
{
    if (name == "uniform")
        return UniformSampling{};
    if (name == "mulaw")
        return MuLawSampling{mu, std::nullopt, std::nullopt};
    throw std::invalid_argument("unknown strategy '" + name + "' (expected uniform or mulaw)");
}

int run_sample(const SampleArgs &a)
{
    const MatrixFile map = read_tagged_matrix(a.map);
    const SamplingStrategy strategy = make_strategy(a.strategy, a.mu);
    const SampleMask mask = build_mask(map.grid, a.rho, strategy, a.seed);
    write_mask(a.out, mask, map.values, strategy, a.seed);
    return 0;
}

int run_reconstruct(const ReconstructArgs &a)
{
    const Method method = parse_method(a.method);
    if (method == Method::rbf_mc_fixed && !a.delta)
        throw std::invalid_argument("rbf_mc_fixed needs --delta");
    const MatrixFile map = read_tagged_matrix(a.map);
    const MaskFile mask = read_mask(a.mask);
    if (mask.mask.n_theta != map.grid.n_theta || mask.mask.n_r != map.grid.n_r)
        throw std::invalid_argument("mask shape does not match the map grid");

    const Reconstruction rec = reconstruct(method, mask.mask, mask.values, map.grid, {}, a.delta);
    nlohmann::json extra = {{"method", method_name(method)}};
    if (!std::isnan(rec.delta))
        extra["delta"] = rec.delta;
    if (rec.huber)
        extra["huber"] = huber_to_json(*rec.huber);
    if (rec.completion)
        extra["solver"] = completion_to_json(*rec.completion);
    write_tagged_matrix(a.out, rec.estimate, rec.kind, map.grid, extra);

    if (rec.completion && !rec.completion->converged)
    {
        std::cerr << "warning: solver stopped after " << rec.completion->iterations
                  << " iterations without converging\n";
        if (a.strict)
            return kExitNotConverged;
    }
    return 0;
}

int run_evaluate(const EvaluateArgs &a)
{
    const MatrixFile truth = read_tagged_matrix(a.truth);
    const MatrixFile est = read_tagged_matrix(a.estimate);
    std::printf("%.17g\n", nmse(truth.values, est.values));
    return 0;
}

void write_singular_energy(const fs::path &path, const Scene &scene)
{
    const Eigen::MatrixXd clean =
        clean_map(scene.grid, scene.geometry(), Beamformer::omnidirectional(scene.n_elements), scene.power);
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot write " + path.string());
    os << "k,energy_fraction\n";
    const auto kmax = static_cast<std::size_t>(std::min(clean.rows(), clean.cols()));
    char buf[64];
    for (std::size_t k = 1; k <= kmax; ++k)
    {
        std::snprintf(buf, sizeof buf, "%.17g", singular_energy(clean, k));
        os << k << ',' << buf << '\n';
    }
}

int run_experiment_cmd(const ExperimentArgs &a)
{
    ExperimentConfig cfg = preset(a.preset);
    if (a.trials)
        cfg.trials = *a.trials;
    if (a.seed)
        cfg.base_seed = *a.seed;
    const auto records = run_experiment(cfg);
    write_records(fs::path(a.out), records);
    if (a.preset == "fig2b")
    {
        fs::path sv = a.out;
        sv.replace_filename(sv.stem().string() + "_singular_energy.csv");
        write_singular_energy(sv, cfg.scene);
    }
    std::size_t failed = 0;
    for (const auto &r : records)
        failed += r.error.empty() ? 0 : 1;
    if (failed > 0)
        std::cerr << "warning: " << failed << " of " << records.size() << " records failed\n";
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Near-field radio map generation, sampling and reconstruction"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto *g = app.add_subcommand("generate", "simulate a radio map");
    g->add_option("--config", gen.config, "scene JSON (grid, n_elements, carrier_freq_hz, power_w, sigma_db, seed)");
    g->add_option("--sigma", gen.sigma, "shadowing standard deviation in dB");
    g->add_option("--seed", gen.seed, "shadowing seed");
    g->add_option("--out", gen.out, "output map CSV")->required();

    SampleArgs smp;
    auto *s = app.add_subcommand("sample", "draw a sampling mask from a map");
    s->add_option("--map", smp.map, "map CSV")->required();
    s->add_option("--rho", smp.rho, "sampling ratio in (0, 1]");
    s->add_option("--strategy", smp.strategy, "uniform or mulaw");
    s->add_option("--mu", smp.mu, "companding parameter for mulaw");
    s->add_option("--seed", smp.seed, "mask seed");
    s->add_option("--out", smp.out, "output mask CSV")->required();

    ReconstructArgs rec;
    auto *r = app.add_subcommand("reconstruct", "reconstruct a map from a mask");
    r->add_option("--method", rec.method, "rbf, rbf_noconst, rbf_gaussian, rbf_tps, rbf_mc_huber, rbf_mc_fixed, "
                                          "mc_nnm, lpr or lpr_mc")
        ->required();
    r->add_option("--map", rec.map, "map CSV providing the grid")->required();
    r->add_option("--mask", rec.mask, "mask CSV with observed values")->required();
    r->add_option("--out", rec.out, "output estimate CSV")->required();
    r->add_option("--delta", rec.delta, "box tolerance in dB for rbf_mc_fixed");
    r->add_flag("--strict", rec.strict, "exit with status 3 if the solver does not converge");

    EvaluateArgs ev;
    auto *e = app.add_subcommand("evaluate", "print the NMSE of an estimate");
    e->add_option("--truth", ev.truth, "reference map CSV")->required();
    e->add_option("--estimate", ev.estimate, "estimate CSV")->required();

    ExperimentArgs ex;
    auto *x = app.add_subcommand("experiment", "run a preset Monte Carlo experiment");
    x->add_option("--preset", ex.preset, "fig2b, fig5 ... fig11")->required();
    x->add_option("--trials", ex.trials, "Monte Carlo trials per point");
    x->add_option("--seed", ex.seed, "base seed");
    x->add_option("--out", ex.out, "output records CSV")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &err)
    {
        return app.exit(err);
    }
    catch (const CLI::ParseError &err)
    {
        app.exit(err);
        return kExitInvalid;
    }

    try
    {
        if (g->parsed())
            return run_generate(gen);
        if (s->parsed())
            return run_sample(smp);
        if (r->parsed())
            return run_reconstruct(rec);
        if (e->parsed())
            return run_evaluate(ev);
        return run_experiment_cmd(ex);
    }
    catch (const nlohmann::json::exception &err)
    {
        std::cerr << "error: malformed JSON: " << err.what() << '\n';
        return kExitInvalid;
    }
    catch (const std::invalid_argument &err)
    {
        std::cerr << "error: " << err.what() << '\n';
        return kExitInvalid;
    }
    catch (const std::exception &err)
    {
        std::cerr << "error: " << err.what() << '\n';
        return kExitRuntime;
    }
}
