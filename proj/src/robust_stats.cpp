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

#include "nfmap/robust_stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nfmap
{

double huber_loss(double r, double threshold)
{
    if (!(threshold > 0.0))
        throw std::invalid_argument("huber_loss: threshold must be positive");
    const double a = std::abs(r);
    return a <= threshold ? 0.5 * r * r : threshold * (a - 0.5 * threshold);
}

double huber_objective(std::span<const double> values, double center, double threshold)
{
    double acc = 0.0;
    for (double v : values)
        acc += huber_loss(v - center, threshold);
    return acc;
}

double median(std::span<const double> values)
{
    if (values.empty())
        throw std::invalid_argument("median of an empty list");
    std::vector<double> v(values.begin(), values.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1)
        return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return lower + 0.5 * (upper - lower);
}

double mad(std::span<const double> values)
{
    const double m = median(values);
    std::vector<double> dev(values.size());
    std::transform(values.begin(), values.end(), dev.begin(), [m](double v) { return std::abs(v - m); });
    return median(dev);
}

void HuberConfig::validate() const
{
    if (threshold && !(*threshold > 0.0))
        throw std::invalid_argument("Huber threshold must be positive");
    if (max_iters < 1)
        throw std::invalid_argument("Huber max_iters must be at least 1");
    if (!(tol > 0.0))
        throw std::invalid_argument("Huber tolerance must be positive");
}

double resolve_threshold(std::span<const double> values, const HuberConfig &cfg)
{
    if (cfg.threshold)
        return *cfg.threshold;
    const double s = mad(values);
    if (s > 0.0)
        return s;
    const double m = median(values);
    double mean_abs = 0.0;
    for (double v : values)
        mean_abs += std::abs(v - m);
    mean_abs /= static_cast<double>(values.size());
    return 1e-6 + 1.4826 * mean_abs;
}

HuberResult huber_estimate(std::span<const double> values, const HuberConfig &cfg)
{
    cfg.validate();
    if (values.empty())
        throw std::invalid_argument("huber_estimate: empty input");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("huber_estimate: non-finite value");

    HuberResult res;
    res.threshold = resolve_threshold(values, cfg);
    const double s = res.threshold;

    double mu = median(values);
    res.objective_trace.push_back(huber_objective(values, mu, s));
    for (int it = 1; it <= cfg.max_iters; ++it)
    {
        double wsum = 0.0, wv = 0.0;
        for (double v : values)
        {
            const double a = std::abs(v - mu);
            const double w = a <= s ? 1.0 : s / a;
            wsum += w;
            wv += w * v;
        }
        const double next = wv / wsum;
        const double step = std::abs(next - mu);
        mu = next;
        res.iterations = it;
        res.objective_trace.push_back(huber_objective(values, mu, s));
        if (step <= cfg.tol)
        {
            res.converged = true;
            break;
        }
    }
    res.center = mu;
    return res;
}

HuberResult select_delta(std::span<const double> pooled_residuals, const HuberConfig &cfg)
{
    if (pooled_residuals.empty())
        throw std::invalid_argument("select_delta: no residuals");
    std::vector<double> a(pooled_residuals.size());
    std::transform(pooled_residuals.begin(), pooled_residuals.end(), a.begin(), [](double e) { return std::abs(e); });
    // Sorting fixes the summation order, so the result does not depend on input order.
    std::sort(a.begin(), a.end());
    HuberResult res = huber_estimate(a, cfg);
    res.center = std::max(res.center, 0.0);
    return res;
}

} // namespace nfmap
