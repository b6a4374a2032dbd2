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

#include "nfmap/sampling.hpp"

#include "nfmap/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace nfmap
{

void MuLawParams::validate() const
{
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("MuLawParams: mu must be positive");
    if (!(z0 < z1))
        throw std::invalid_argument("MuLawParams: need z0 < z1");
}

std::string strategy_name(const SamplingStrategy &strategy)
{
    return std::holds_alternative<UniformSampling>(strategy) ? "uniform" : "mulaw";
}

std::size_t SampleMask::size() const
{
    std::size_t total = 0;
    for (const auto &row : per_angle)
        total += row.size();
    return total;
}

bool SampleMask::contains(std::size_t i, std::size_t j) const
{
    if (i >= per_angle.size())
        return false;
    return std::binary_search(per_angle[i].begin(), per_angle[i].end(), j);
}

std::vector<std::pair<std::size_t, std::size_t>> SampleMask::entries() const
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(size());
    for (std::size_t i = 0; i < per_angle.size(); ++i)
        for (std::size_t j : per_angle[i])
            out.emplace_back(i, j);
    return out;
}

void SampleMask::validate() const
{
    if (per_angle.size() != n_theta)
        throw std::invalid_argument("SampleMask: row count does not match n_theta");
    for (const auto &row : per_angle)
    {
        for (std::size_t k = 0; k < row.size(); ++k)
        {
            if (row[k] >= n_r)
                throw std::invalid_argument("SampleMask: radial index out of range");
            if (k > 0 && row[k] <= row[k - 1])
                throw std::invalid_argument("SampleMask: radial indices must be strictly increasing");
        }
    }
}

double mu_law_forward(double x, double mu)
{
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("mu_law_forward: x must lie in [0, 1]");
    if (!(mu > 0.0))
        throw std::invalid_argument("mu_law_forward: mu must be positive");
    return std::log1p(mu * x) / std::log1p(mu);
}

double mu_law_inverse(double y, double mu)
{
    if (!(y >= 0.0 && y <= 1.0))
        throw std::invalid_argument("mu_law_inverse: y must lie in [0, 1]");
    if (!(mu > 0.0))
        throw std::invalid_argument("mu_law_inverse: mu must be positive");
    // expm1 keeps the small-mu limit (identity) accurate.
    return std::expm1(y * std::log1p(mu)) / mu;
}

std::vector<double> draw_nonuniform_radii(std::size_t count, const MuLawParams &params, std::uint64_t seed)
{
    if (count == 0)
        throw std::invalid_argument("draw_nonuniform_radii: count must be at least 1");
    params.validate();
    Rng rng(seed);
    std::vector<double> radii(count);
    for (auto &r : radii)
    {
        const double y = mu_law_inverse(rng.uniform(), params.mu);
        r = std::clamp(params.z0 + y * (params.z1 - params.z0), params.z0, params.z1);
    }
    return radii;
}

namespace
{

std::vector<std::size_t> uniform_row(std::size_t n_r, std::size_t k, Rng &rng)
{
    std::vector<std::size_t> pool(n_r);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    // Partial Fisher-Yates: the first k slots are an equiprobable k-subset.
    for (std::size_t a = 0; a < k; ++a)
    {
        const std::size_t b = a + static_cast<std::size_t>(rng.below(n_r - a));
        std::swap(pool[a], pool[b]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

// Unchosen index farthest from every chosen one; ties go to the smaller index.
std::size_t farthest_free_index(const std::set<std::size_t> &chosen, std::size_t n_r)
{
    std::size_t best = 0;
    std::size_t best_gap = 0;
    bool found = false;
    for (std::size_t j = 0; j < n_r; ++j)
    {
        if (chosen.count(j))
            continue;
        std::size_t gap = n_r;
        auto above = chosen.lower_bound(j);
        if (above != chosen.end())
            gap = std::min(gap, *above - j);
        if (above != chosen.begin())
            gap = std::min(gap, j - *std::prev(above));
        if (!found || gap > best_gap)
        {
            best = j;
            best_gap = gap;
            found = true;
        }
    }
    return best;
}

std::vector<std::size_t> mulaw_row(const GridSpec &grid, std::size_t k, const MuLawParams &params, Rng &rng)
{
    const double step = grid.radial_step();
    std::set<std::size_t> chosen;
    std::size_t draws = 0;
    while (chosen.size() < k && draws < 10 * k)
    {
        const double y = mu_law_inverse(rng.uniform(), params.mu);
        const double r = params.z0 + y * (params.z1 - params.z0);
        const double pos = std::round((r - grid.r_min) / step);
        const auto j = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(grid.n_r - 1)));
        chosen.insert(j);
        ++draws;
    }
    while (chosen.size() < k)
        chosen.insert(farthest_free_index(chosen, grid.n_r));
    return {chosen.begin(), chosen.end()};
}

} // namespace

SampleMask build_mask(const GridSpec &grid, double ratio, const SamplingStrategy &strategy, std::uint64_t seed)
{
    grid.validate();
    if (!(ratio > 0.0 && ratio <= 1.0))
        throw std::invalid_argument("build_mask: sampling ratio must lie in (0, 1]");
    const double k_real = std::round(ratio * static_cast<double>(grid.n_r));
    if (k_real < 2.0)
        throw std::invalid_argument("build_mask: fewer than 2 samples per angular slice");
    const auto k = static_cast<std::size_t>(k_real);
    if (k > grid.n_r)
        throw std::invalid_argument("build_mask: more samples than radial cells");

    SampleMask mask;
    mask.n_theta = grid.n_theta;
    mask.n_r = grid.n_r;
    mask.target_ratio = ratio;
    mask.per_angle.resize(grid.n_theta);

    std::optional<MuLawParams> params;
    if (const auto *ml = std::get_if<MuLawSampling>(&strategy))
    {
        params = MuLawParams{ml->mu, ml->z0.value_or(grid.r_min), ml->z1.value_or(grid.r_max)};
        params->validate();
    }

    for (std::size_t i = 0; i < grid.n_theta; ++i)
    {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
        mask.per_angle[i] = params ? mulaw_row(grid, k, *params, rng) : uniform_row(grid.n_r, k, rng);
    }
    return mask;
}

double fill_distance(const std::vector<double> &points, double a, double b)
{
    if (points.empty())
        throw std::invalid_argument("fill_distance: no points");
    if (!std::is_sorted(points.begin(), points.end()))
        throw std::invalid_argument("fill_distance: points must be sorted");
    if (points.front() < a || points.back() > b)
        throw std::invalid_argument("fill_distance: points must lie within the domain");
    double h = std::max(points.front() - a, b - points.back());
    for (std::size_t k = 1; k < points.size(); ++k)
        h = std::max(h, (points[k] - points[k - 1]) / 2.0);
    return h;
}

} // namespace nfmap
