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

#include "nfmap/sim_channel.hpp"

#include "nfmap/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nfmap
{

std::vector<double> element_offsets(std::size_t n_elements)
{
    if (n_elements == 0)
        throw std::invalid_argument("element_offsets: array needs at least one element");
    std::vector<double> offsets(n_elements);
    const double n_total = static_cast<double>(n_elements);
    for (std::size_t n = 1; n <= n_elements; ++n)
        offsets[n - 1] = (2.0 * static_cast<double>(n) - n_total - 1.0) / 2.0;
    return offsets;
}

ArrayGeometry ArrayGeometry::make(std::size_t n_elements, double carrier_freq_hz)
{
    if (!(carrier_freq_hz > 0.0) || !std::isfinite(carrier_freq_hz))
        throw std::invalid_argument("ArrayGeometry: carrier frequency must be positive");
    ArrayGeometry geom;
    geom.n_elements = n_elements;
    geom.carrier_freq = carrier_freq_hz;
    geom.wavelength = kSpeedOfLight / carrier_freq_hz;
    geom.element_offsets = nfmap::element_offsets(n_elements);
    return geom;
}

Beamformer Beamformer::omnidirectional(std::size_t n_elements)
{
    if (n_elements == 0)
        throw std::invalid_argument("Beamformer: array needs at least one element");
    const double w = 1.0 / std::sqrt(static_cast<double>(n_elements));
    return Beamformer{std::vector<std::complex<double>>(n_elements, {w, 0.0})};
}

Beamformer Beamformer::from_weights(std::vector<std::complex<double>> weights)
{
    double norm2 = 0.0;
    for (const auto &w : weights)
        norm2 += std::norm(w);
    if (weights.empty() || std::abs(std::sqrt(norm2) - 1.0) > 1e-12)
        throw std::invalid_argument("Beamformer: weights must have unit Euclidean norm");
    return Beamformer{std::move(weights)};
}

void GridSpec::validate() const
{
    if (!(theta_min < theta_max))
        throw std::invalid_argument("GridSpec: theta_min must be below theta_max");
    if (!(r_min > 0.0) || !(r_min < r_max))
        throw std::invalid_argument("GridSpec: need 0 < r_min < r_max");
    if (n_theta < 2 || n_r < 2)
        throw std::invalid_argument("GridSpec: need at least 2 angular and 2 radial points");
}

double GridSpec::theta_deg(std::size_t i) const
{
    return theta_min + static_cast<double>(i) * (theta_max - theta_min) / static_cast<double>(n_theta - 1);
}

double GridSpec::radius(std::size_t j) const
{
    return r_min + static_cast<double>(j) * (r_max - r_min) / static_cast<double>(n_r - 1);
}

std::vector<double> GridSpec::radii() const
{
    std::vector<double> r(n_r);
    for (std::size_t j = 0; j < n_r; ++j)
        r[j] = radius(j);
    return r;
}

double element_distance(double d, double theta_deg, double delta_n, double wavelength)
{
    if (!(d > 0.0))
        throw std::invalid_argument("element_distance: distance must be positive");
    const double radicand = d * d + delta_n * delta_n * wavelength * wavelength / 4.0 -
                            d * std::cos(deg_to_rad(theta_deg)) * delta_n * wavelength;
    return std::sqrt(std::max(radicand, 0.0));
}

namespace
{

void check_pair(const ArrayGeometry &geom, const Beamformer &bf)
{
    if (geom.n_elements == 0 || geom.element_offsets.size() != geom.n_elements)
        throw std::invalid_argument("ArrayGeometry: element offsets do not match element count");
    if (bf.weights.size() != geom.n_elements)
        throw std::invalid_argument("Beamformer: weight count does not match the array");
}

// sum_n v_n exp(-j 2 pi d_n / lambda); the phase is reduced modulo one
// wavelength before the exponential.
std::complex<double> phasor_sum(double d, double cos_theta, const ArrayGeometry &geom,
                                const Beamformer &bf)
{
    const double lambda = geom.wavelength;
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t n = 0; n < geom.n_elements; ++n)
    {
        const double delta = geom.element_offsets[n];
        const double radicand = d * d + delta * delta * lambda * lambda / 4.0 - d * cos_theta * delta * lambda;
        const double cycles = std::sqrt(std::max(radicand, 0.0)) / lambda;
        const double phase = 2.0 * std::numbers::pi * (cycles - std::floor(cycles));
        acc += bf.weights[n] * std::complex<double>(std::cos(phase), -std::sin(phase));
    }
    return acc;
}

} // namespace

std::complex<double> array_factor(double d, double theta_deg, const ArrayGeometry &geom,
                                  const Beamformer &bf)
{
    if (!(d > 0.0))
        throw std::invalid_argument("array_factor: distance must be positive");
    check_pair(geom, bf);
    const double scale = geom.wavelength / (4.0 * std::numbers::pi * d);
    return scale * phasor_sum(d, std::cos(deg_to_rad(theta_deg)), geom, bf);
}

double rss_db(double d, double theta_deg, const ArrayGeometry &geom, const Beamformer &bf,
              double power, double shadow_db)
{
    if (!(power > 0.0))
        throw std::invalid_argument("rss_db: transmit power must be positive");
    const std::complex<double> s = array_factor(d, theta_deg, geom, bf);
    const double linear = power / static_cast<double>(geom.n_elements) * std::norm(s);
    if (linear == 0.0)
        return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(linear) + shadow_db;
}

Eigen::MatrixXd clean_map(const GridSpec &grid, const ArrayGeometry &geom, const Beamformer &bf,
                          double power)
{
    grid.validate();
    check_pair(geom, bf);
    if (!(power > 0.0))
        throw std::invalid_argument("clean_map: transmit power must be positive");

    Eigen::MatrixXd values(grid.n_theta, grid.n_r);
    const double gain = power / static_cast<double>(geom.n_elements);
    for (std::size_t i = 0; i < grid.n_theta; ++i)
    {
        const double cos_theta = std::cos(deg_to_rad(grid.theta_deg(i)));
        for (std::size_t j = 0; j < grid.n_r; ++j)
        {
            const double d = grid.radius(j);
            const double scale = geom.wavelength / (4.0 * std::numbers::pi * d);
            const double linear = gain * std::norm(scale * phasor_sum(d, cos_theta, geom, bf));
            values(i, j) = linear < kNullPowerFloor ? kNullFloorDb : 10.0 * std::log10(linear);
        }
    }
    return values;
}

Eigen::MatrixXd add_shadowing(const Eigen::MatrixXd &clean, double sigma, std::uint64_t seed)
{
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("add_shadowing: sigma must be non-negative");
    Eigen::MatrixXd values = clean;
    if (sigma == 0.0)
        return values;
    for (Eigen::Index i = 0; i < values.rows(); ++i)
        for (Eigen::Index j = 0; j < values.cols(); ++j)
        {
            Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)}));
            values(i, j) += sigma * rng.normal();
        }
    return values;
}

RadioMap generate_map(const GridSpec &grid, const ArrayGeometry &geom, const Beamformer &bf,
                      double power, double sigma, std::uint64_t seed)
{
    RadioMap map;
    map.grid = grid;
    map.seed = seed;
    map.sigma_shadow = sigma;
    map.values = add_shadowing(clean_map(grid, geom, bf, power), sigma, seed);
    return map;
}

SensitivityBounds sensitivity_bounds(double d, double theta_deg, const ArrayGeometry &geom)
{
    if (!(d > 0.0))
        throw std::invalid_argument("sensitivity_bounds: distance must be positive");
    double d_min = std::numeric_limits<double>::infinity();
    for (double delta : geom.element_offsets)
        d_min = std::min(d_min, element_distance(d, theta_deg, delta, geom.wavelength));
    if (!(d_min > 0.0))
        throw std::invalid_argument("sensitivity_bounds: receiver coincides with an element");

    const double n = static_cast<double>(geom.n_elements);
    const double lambda = geom.wavelength;
    SensitivityBounds b;
    b.angular = 5.0 * lambda * std::abs(std::sin(deg_to_rad(theta_deg))) / (16.0 * d_min) * n * n;
    b.radial = (lambda / (4.0 * std::numbers::pi * d * d) + 1.0 / (2.0 * d)) * n;
    return b;
}

} // namespace nfmap
