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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace oracle
{

namespace
{

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

} // namespace

long double cartesian_distance(double d, double theta_deg, double delta_n, double wavelength)
{
    const long double t = static_cast<long double>(theta_deg) * kPiL / 180.0L;
    const long double rx = static_cast<long double>(d) * std::sin(t);
    const long double ry = static_cast<long double>(d) * std::cos(t);
    const long double ey = static_cast<long double>(delta_n) * static_cast<long double>(wavelength) / 2.0L;
    return std::hypot(rx, ry - ey);
}

std::complex<long double> array_factor_ld(double d, double theta_deg, const nfmap::ArrayGeometry &geom,
                                          const nfmap::Beamformer &bf)
{
    const long double lambda = geom.wavelength;
    std::complex<long double> acc{0.0L, 0.0L};
    for (std::size_t n = 0; n < geom.n_elements; ++n)
    {
        const long double dn = cartesian_distance(d, theta_deg, geom.element_offsets[n], geom.wavelength);
        const long double phase = -2.0L * kPiL * dn / lambda;
        const std::complex<long double> v(bf.weights[n].real(), bf.weights[n].imag());
        acc += v * std::complex<long double>(std::cos(phase), std::sin(phase));
    }
    return acc * (lambda / (4.0L * kPiL * static_cast<long double>(d)));
}

std::complex<double> array_factor_far_field(double d, double theta_deg, const nfmap::ArrayGeometry &geom,
                                            const nfmap::Beamformer &bf)
{
    const double pi = 3.141592653589793;
    const double c = std::cos(theta_deg * pi / 180.0);
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t n = 0; n < geom.n_elements; ++n)
    {
        const double dn = d - geom.element_offsets[n] * geom.wavelength / 2.0 * c;
        acc += bf.weights[n] * std::polar(1.0, -2.0 * pi * dn / geom.wavelength);
    }
    return acc * (geom.wavelength / (4.0 * pi * d));
}

long double rss_db_ld(double d, double theta_deg, const nfmap::ArrayGeometry &geom, const nfmap::Beamformer &bf,
                      double power)
{
    const long double mag2 = std::norm(array_factor_ld(d, theta_deg, geom, bf));
    return 10.0L * std::log10(static_cast<long double>(power) / static_cast<long double>(geom.n_elements) * mag2);
}

double central_difference(const std::function<double(double)> &f, double x, double h)
{
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

namespace
{

Eigen::MatrixXd kernel_matrix(const std::vector<double> &u, const nfmap::RbfKernel &kernel)
{
    const auto k = static_cast<Eigen::Index>(u.size());
    Eigen::MatrixXd phi(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b)
            phi(a, b) = kernel(std::abs(u[a] - u[b]));
    return phi;
}

} // namespace

RbfCoefficients rbf_closed_form(const std::vector<double> &u, const std::vector<double> &values,
                                const nfmap::RbfKernel &kernel)
{
    const Eigen::MatrixXd phi_inv = kernel_matrix(u, kernel).fullPivLu().inverse();
    const Eigen::Map<const Eigen::VectorXd> gamma(values.data(), static_cast<Eigen::Index>(values.size()));
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(gamma.size());
    RbfCoefficients out;
    out.constant = ones.dot(phi_inv * gamma) / ones.dot(phi_inv * ones);
    const Eigen::VectorXd lam = phi_inv * (gamma - out.constant * ones);
    out.lambda.assign(lam.data(), lam.data() + lam.size());
    return out;
}

RbfCoefficients rbf_bordered_qr(const std::vector<double> &u, const std::vector<double> &values,
                                const nfmap::RbfKernel &kernel)
{
    const auto k = static_cast<Eigen::Index>(u.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k + 1, k + 1);
    a.topLeftCorner(k, k) = kernel_matrix(u, kernel);
    a.col(k).head(k).setOnes();
    a.row(k).head(k).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
    for (Eigen::Index j = 0; j < k; ++j)
        rhs(j) = values[static_cast<std::size_t>(j)];
    const Eigen::VectorXd sol = a.householderQr().solve(rhs);
    RbfCoefficients out;
    out.lambda.assign(sol.data(), sol.data() + k);
    out.constant = sol(k);
    return out;
}

double rbf_eval(const std::vector<double> &u, const RbfCoefficients &coef, const nfmap::RbfKernel &kernel, double x)
{
    long double acc = coef.constant;
    for (std::size_t j = 0; j < u.size(); ++j)
        acc += static_cast<long double>(coef.lambda[j]) * kernel(std::abs(x - u[j]));
    return static_cast<double>(acc);
}

double huber_grid_argmin(const std::vector<double> &values, double threshold, double step)
{
    const double lo = *std::min_element(values.begin(), values.end());
    const double hi = *std::max_element(values.begin(), values.end());
    auto objective = [&](double mu) {
        long double acc = 0.0L;
        for (double v : values)
        {
            const long double r = std::abs(v - mu);
            acc += r <= threshold ? 0.5L * r * r : threshold * (r - 0.5L * threshold);
        }
        return acc;
    };
    double best = lo;
    long double best_val = objective(lo);
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step));
    for (std::size_t k = 1; k <= n; ++k)
    {
        const double mu = std::min(hi, lo + static_cast<double>(k) * step);
        const long double val = objective(mu);
        if (val < best_val)
        {
            best_val = val;
            best = mu;
        }
    }
    return best;
}

Eigen::MatrixXd svt_by_search(const Eigen::MatrixXd &m, double tau)
{
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd &s = svd.singularValues();
    Eigen::VectorXd x(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
    {
        // Bisection on the derivative of tau v + (v - s_i)^2 / 2 over v >= 0;
        // a golden-section search on the objective only resolves sqrt(eps).
        auto slope = [&](double v) { return tau + v - s(i); };
        if (slope(0.0) >= 0.0)
        {
            x(i) = 0.0;
            continue;
        }
        double a = 0.0, b = s(i) + tau + 1.0;
        for (int it = 0; it < 200 && b - a > 0.0; ++it)
        {
            const double mid = 0.5 * (a + b);
            if (mid == a || mid == b)
                break;
            (slope(mid) < 0.0 ? a : b) = mid;
        }
        x(i) = 0.5 * (a + b);
    }
    return svd.matrixU() * x.asDiagonal() * svd.matrixV().transpose();
}

long double nmse_ld(const Eigen::MatrixXd &truth, const Eigen::MatrixXd &estimate)
{
    long double num = 0.0L, den = 0.0L;
    for (Eigen::Index i = 0; i < truth.rows(); ++i)
        for (Eigen::Index j = 0; j < truth.cols(); ++j)
        {
            const long double a = std::pow(10.0L, static_cast<long double>(truth(i, j)) / 10.0L);
            const long double b = std::pow(10.0L, static_cast<long double>(estimate(i, j)) / 10.0L);
            num += (a - b) * (a - b);
            den += a * a;
        }
    return num / den;
}

double fill_distance_scan(const std::vector<double> &points, double a, double b, std::size_t samples)
{
    double worst = 0.0;
    for (std::size_t k = 0; k < samples; ++k)
    {
        const double x = a + (b - a) * static_cast<double>(k) / static_cast<double>(samples - 1);
        double nearest = std::numeric_limits<double>::infinity();
        for (double p : points)
            nearest = std::min(nearest, std::abs(x - p));
        worst = std::max(worst, nearest);
    }
    return worst;
}

Eigen::MatrixXd nearest_neighbor_fill(const nfmap::SampleMask &mask, const Eigen::MatrixXd &values,
                                      const nfmap::GridSpec &grid)
{
    Eigen::MatrixXd out(grid.n_theta, grid.n_r);
    for (std::size_t i = 0; i < grid.n_theta; ++i)
        for (std::size_t j = 0; j < grid.n_r; ++j)
        {
            std::size_t best = mask.per_angle[i].front();
            for (std::size_t o : mask.per_angle[i])
                if (std::abs(grid.radius(o) - grid.radius(j)) < std::abs(grid.radius(best) - grid.radius(j)))
                    best = o;
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(best));
        }
    return out;
}

double local_linear_qr(const std::vector<double> &r, const std::vector<double> &y, double query, double bandwidth)
{
    const auto k = static_cast<Eigen::Index>(r.size());
    Eigen::MatrixXd x(k, 2);
    Eigen::VectorXd b(k);
    for (Eigen::Index a = 0; a < k; ++a)
    {
        const double dx = r[static_cast<std::size_t>(a)] - query;
        const double sw = std::sqrt(std::exp(-dx * dx / (2.0 * bandwidth * bandwidth)));
        x(a, 0) = sw;
        x(a, 1) = sw * dx;
        b(a) = sw * y[static_cast<std::size_t>(a)];
    }
    return x.colPivHouseholderQr().solve(b)(0);
}

double ks_uniform(std::vector<double> sample)
{
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t k = 0; k < sample.size(); ++k)
    {
        const double lo = static_cast<double>(k) / n;
        const double hi = static_cast<double>(k + 1) / n;
        d = std::max({d, std::abs(sample[k] - lo), std::abs(hi - sample[k])});
    }
    return d;
}

} // namespace oracle
