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

#include <catch2/catch_amalgamated.hpp>

#include "nfmap/rng.hpp"
#include "nfmap/sampling.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace nfmap;

TEST_CASE("mu-law forward values", "[sampling]")
{
    CHECK(mu_law_forward(0.0, 15.0) == 0.0);
    CHECK(mu_law_forward(1.0, 15.0) == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(mu_law_forward(0.2, 15.0) == Catch::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(mu_law_forward(-0.1, 15.0), std::invalid_argument);
    CHECK_THROWS_AS(mu_law_forward(1.1, 15.0), std::invalid_argument);
    CHECK_THROWS_AS(mu_law_forward(0.5, 0.0), std::invalid_argument);

    double prev = -1.0;
    for (int k = 0; k <= 100; ++k)
    {
        const double f = mu_law_forward(k / 100.0, 15.0);
        CHECK(f > prev);
        prev = f;
    }
}

TEST_CASE("mu-law inverse values and round trip", "[sampling]")
{
    CHECK(mu_law_inverse(0.5, 15.0) == Catch::Approx(0.2).epsilon(1e-14));
    CHECK(mu_law_inverse(0.0, 15.0) == 0.0);
    CHECK(mu_law_inverse(1.0, 15.0) == Catch::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(mu_law_inverse(1.5, 15.0), std::invalid_argument);

    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.0, 1.0), mu_dist(1e-3, 255.0);
    for (int k = 0; k < 1000; ++k)
    {
        const double x = u(gen), mu = mu_dist(gen);
        REQUIRE(std::abs(mu_law_inverse(mu_law_forward(x, mu), mu) - x) < 1e-12);
    }
}

TEST_CASE("Non-uniform radii", "[sampling]")
{
    const MuLawParams p{15.0, 0.1, 10.0};
    const auto a = draw_nonuniform_radii(500, p, 3);
    CHECK(a == draw_nonuniform_radii(500, p, 3));
    CHECK(a != draw_nonuniform_radii(500, p, 4));
    for (double r : a)
    {
        CHECK(r >= p.z0);
        CHECK(r <= p.z1);
    }
    CHECK_THROWS_AS(draw_nonuniform_radii(0, p, 3), std::invalid_argument);
    CHECK_THROWS_AS(draw_nonuniform_radii(5, MuLawParams{15.0, 2.0, 1.0}, 3), std::invalid_argument);
}

TEST_CASE("Tiny mu gives uniform radii", "[sampling]")
{
    const auto r = draw_nonuniform_radii(10000, MuLawParams{1e-9, 0.0, 1.0}, 8);
    CHECK(oracle::ks_uniform(r) < 0.05);
}

TEST_CASE("mu = 15 puts the median at 0.2", "[sampling]")
{
    auto y = draw_nonuniform_radii(10000, MuLawParams{15.0, 0.0, 1.0}, 21);
    std::nth_element(y.begin(), y.begin() + 5000, y.end());
    CHECK(std::abs(y[5000] - 0.2) < 0.02);
}

TEST_CASE("Full observation mask", "[sampling]")
{
    GridSpec grid;
    const auto m = build_mask(grid, 1.0, UniformSampling{}, 1);
    CHECK(m.size() == grid.n_theta * grid.n_r);
    const auto mm = build_mask(grid, 1.0, MuLawSampling{}, 1);
    CHECK(mm.size() == grid.n_theta * grid.n_r);
}

TEST_CASE("Per-row cardinality is exact", "[sampling][property]")
{
    GridSpec grid;
    for (double rho : {0.02, 0.05, 0.1, 0.12, 0.2, 0.37})
        for (const SamplingStrategy &s : {SamplingStrategy{UniformSampling{}}, SamplingStrategy{MuLawSampling{}}})
            for (std::uint64_t seed = 0; seed < 5; ++seed)
            {
                const auto m = build_mask(grid, rho, s, seed);
                const auto k = static_cast<std::size_t>(std::round(rho * grid.n_r));
                REQUIRE_NOTHROW(m.validate());
                for (const auto &row : m.per_angle)
                {
                    REQUIRE(row.size() == k);
                    REQUIRE(std::set<std::size_t>(row.begin(), row.end()).size() == k);
                    REQUIRE(std::is_sorted(row.begin(), row.end()));
                    REQUIRE(row.back() < grid.n_r);
                }
                REQUIRE(m.size() == k * grid.n_theta);
                REQUIRE(m.entries().size() == m.size());
            }
}

TEST_CASE("Masks are deterministic in the seed", "[sampling][property]")
{
    GridSpec grid;
    for (const SamplingStrategy &s : {SamplingStrategy{UniformSampling{}}, SamplingStrategy{MuLawSampling{}}})
    {
        const auto a = build_mask(grid, 0.1, s, 42);
        CHECK(a.per_angle == build_mask(grid, 0.1, s, 42).per_angle);
        CHECK(a.per_angle != build_mask(grid, 0.1, s, 43).per_angle);
    }
}

TEST_CASE("Rows do not depend on the number of rows", "[sampling]")
{
    GridSpec small;
    small.n_theta = 5;
    GridSpec big;
    big.n_theta = 50;
    const auto a = build_mask(small, 0.1, UniformSampling{}, 9);
    const auto b = build_mask(big, 0.1, UniformSampling{}, 9);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(a.per_angle[i] == b.per_angle[i]);
}

TEST_CASE("Mask argument checks", "[sampling]")
{
    GridSpec grid;
    CHECK_THROWS_AS(build_mask(grid, 0.01, UniformSampling{}, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_mask(grid, 0.0, UniformSampling{}, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_mask(grid, 1.5, UniformSampling{}, 1), std::invalid_argument);
    CHECK_NOTHROW(build_mask(grid, 0.02, UniformSampling{}, 1));
}

TEST_CASE("Uniform rows are equiprobable", "[sampling]")
{
    GridSpec grid;
    grid.n_theta = 2000;
    grid.n_r = 20;
    const auto m = build_mask(grid, 0.25, UniformSampling{}, 5);
    std::vector<int> counts(20, 0);
    for (const auto &row : m.per_angle)
        for (std::size_t j : row)
            ++counts[j];
    // 2000 rows x 5 picks over 20 cells: 500 expected per cell.
    for (int c : counts)
        CHECK(std::abs(c - 500) < 100);
}

TEST_CASE("mu-law masks concentrate near the transmitter", "[sampling]")
{
    GridSpec grid;
    std::size_t near = 0, far = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const auto m = build_mask(grid, 0.1, MuLawSampling{}, seed);
        for (const auto &row : m.per_angle)
            for (std::size_t j : row)
            {
                near += j < grid.n_r / 4 ? 1 : 0;
                far += j >= 3 * grid.n_r / 4 ? 1 : 0;
            }
    }
    CHECK(near > far);
}

TEST_CASE("Collisions fall back to the farthest free cells", "[sampling]")
{
    // A companding range inside the first cell sends every draw to index 0, so
    // the remaining samples come from the fallback: 19 is farthest from {0},
    // then 9 (ties with 10 go to the smaller index), then 14.
    GridSpec grid;
    grid.n_theta = 3;
    grid.n_r = 20;
    const auto m = build_mask(grid, 0.2, MuLawSampling{15.0, grid.r_min, grid.r_min + 0.01}, 2);
    for (const auto &row : m.per_angle)
        CHECK(row == std::vector<std::size_t>{0, 9, 14, 19});

    // With mu = 1e12 most draws collapse onto the first cells; rows stay valid.
    const auto crowded = build_mask(grid, 0.5, MuLawSampling{1e12, std::nullopt, std::nullopt}, 2);
    for (const auto &row : crowded.per_angle)
    {
        CHECK(row.size() == 10);
        CHECK(row.front() == 0);
    }
}

TEST_CASE("Fill distance values", "[sampling]")
{
    CHECK(fill_distance({0.0, 0.5, 1.0}, 0.0, 1.0) == Catch::Approx(0.25));
    CHECK(fill_distance({0.5}, 0.0, 1.0) == Catch::Approx(0.5));
    CHECK(fill_distance({0.0, 1.0}, 0.0, 1.0) == Catch::Approx(0.5));
    CHECK_THROWS_AS(fill_distance({}, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(fill_distance({0.6, 0.2}, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(fill_distance({1.5}, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("Fill distance matches a dense scan", "[sampling][property]")
{
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> n_dist(1, 12);
    const std::size_t samples = 100000;
    const double step = 3.0 / static_cast<double>(samples - 1);
    for (int k = 0; k < 20; ++k)
    {
        std::vector<double> pts(static_cast<std::size_t>(n_dist(gen)));
        for (auto &p : pts)
            p = -1.0 + 3.0 * u(gen);
        std::sort(pts.begin(), pts.end());
        const double exact = fill_distance(pts, -1.0, 2.0);
        REQUIRE(std::abs(exact - oracle::fill_distance_scan(pts, -1.0, 2.0, samples)) <= step);
    }
}

TEST_CASE("mu-law draws cover the near interval more densely than uniform draws", "[sampling][property]")
{
    const double z0 = 0.1, z1 = 10.0;
    const double b = z0 + 0.2 * (z1 - z0);
    const std::size_t k = 10;
    auto near_fill = [&](std::vector<double> r) {
        std::vector<double> in;
        for (double v : r)
            if (v <= b)
                in.push_back(v);
        if (in.empty())
            return b - z0;
        std::sort(in.begin(), in.end());
        return fill_distance(in, z0, b);
    };
    int wins = 0, losses = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed)
    {
        const double h_mu = near_fill(draw_nonuniform_radii(k, MuLawParams{15.0, z0, z1}, seed));
        Rng rng(derive_seed(seed, {99}));
        std::vector<double> uni(k);
        for (auto &v : uni)
            v = z0 + rng.uniform() * (z1 - z0);
        const double h_uni = near_fill(uni);
        wins += h_mu < h_uni ? 1 : 0;
        losses += h_mu > h_uni ? 1 : 0;
    }
    CHECK(wins > 250);
    CHECK(wins > losses);
}
