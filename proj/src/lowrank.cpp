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

#include "nfmap/lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace nfmap
{

void SolverConfig::validate() const
{
    if (max_iters < 1)
        throw std::invalid_argument("solver max_iters must be at least 1");
    if (!(rel_change_tol > 0.0))
        throw std::invalid_argument("solver rel_change_tol must be positive");
    if (feasibility_tol && !(*feasibility_tol > 0.0))
        throw std::invalid_argument("solver feasibility_tol must be positive");
    if (!(penalty > 0.0))
        throw std::invalid_argument("solver penalty must be positive");
}

namespace
{

void require_finite(const Eigen::MatrixXd &m, const char *what)
{
    if (!m.allFinite())
        throw std::invalid_argument(std::string(what) + ": matrix has non-finite entries");
}

// Returns the thresholded matrix and writes the nuclear norm of the result.
Eigen::MatrixXd shrink(const Eigen::MatrixXd &m, double tau, double *nuclear)
{
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd &s = svd.singularValues();
    Eigen::Index keep = 0;
    while (keep < s.size() && s(keep) > tau)
        ++keep;
    const Eigen::VectorXd shrunk = s.head(keep).array() - tau;
    if (nuclear)
        *nuclear = shrunk.sum();
    if (keep == 0)
        return Eigen::MatrixXd::Zero(m.rows(), m.cols());
    return svd.matrixU().leftCols(keep) * shrunk.asDiagonal() * svd.matrixV().leftCols(keep).transpose();
}

// Same operator as shrink() computed from the eigen-decomposition of the
// smaller Gram matrix. Singular values below the threshold lose relative
// accuracy this way, but they are zeroed anyway; used inside the solver loop
// where it roughly halves the cost per iteration.
Eigen::MatrixXd shrink_gram(const Eigen::MatrixXd &m, double tau)
{
    const bool wide = m.rows() < m.cols();
    const Eigen::MatrixXd g = wide ? Eigen::MatrixXd(m * m.transpose()) : Eigen::MatrixXd(m.transpose() * m);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    const Eigen::VectorXd &ev = es.eigenvalues(); // ascending
    const Eigen::Index n = ev.size();
    Eigen::Index keep = 0;
    while (keep < n && std::sqrt(std::max(ev(n - 1 - keep), 0.0)) > tau)
        ++keep;
    if (keep == 0)
        return Eigen::MatrixXd::Zero(m.rows(), m.cols());
    const Eigen::MatrixXd v = es.eigenvectors().rightCols(keep);
    const Eigen::ArrayXd s = ev.tail(keep).array().sqrt();
    const Eigen::VectorXd factor = (s - tau) / s;
    if (wide)
        return v * factor.asDiagonal() * (v.transpose() * m);
    return (m * v) * factor.asDiagonal() * v.transpose();
}

double rms(const Eigen::MatrixXd &m)
{
    return m.size() ? m.norm() / std::sqrt(static_cast<double>(m.size())) : 0.0;
}

} // namespace

Eigen::VectorXd singular_values(const Eigen::MatrixXd &m)
{
    require_finite(m, "singular_values");
    return Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues();
}

double nuclear_norm(const Eigen::MatrixXd &m)
{
    require_finite(m, "nuclear_norm");
    return singular_values(m).sum();
}

Eigen::MatrixXd sv_threshold(const Eigen::MatrixXd &m, double tau)
{
    if (!(tau >= 0.0))
        throw std::invalid_argument("sv_threshold: tau must be nonnegative");
    require_finite(m, "sv_threshold");
    if (tau == 0.0)
        return m;
    return shrink(m, tau, nullptr);
}

namespace
{

// Shared Douglas-Rachford loop. project() maps onto the constraint set in
// place; violation() measures how far an iterate is from that set.
template <class Project, class Violation>
CompletionResult douglas_rachford(const Eigen::MatrixXd &start, double tau, double feas_tol,
                                  const SolverConfig &cfg, Project project, Violation violation)
{
    CompletionResult res;
    res.threshold = tau;

    Eigen::MatrixXd y = start;
    Eigen::MatrixXd z, w, z_prev;
    for (int it = 1; it <= cfg.max_iters; ++it)
    {
        z = shrink_gram(y, tau);
        w = 2.0 * z - y;
        project(w);
        const double merit = (w - z).norm();
        y += w - z;
        if (cfg.keep_trace)
            res.merit_trace.push_back(merit);
        res.iterations = it;

        if (it > 1)
        {
            const double denom = std::max(z_prev.norm(), std::numeric_limits<double>::min());
            const double change = (z - z_prev).norm() / denom;
            if (change <= cfg.rel_change_tol && violation(z) <= feas_tol)
            {
                res.converged = true;
                break;
            }
        }
        z_prev = z;
    }
    res.max_violation = violation(z);
    project(z);
    res.solution = std::move(z);
    res.final_nuclear_norm = nuclear_norm(res.solution);
    return res;
}

} // namespace

CompletionResult solve_box_nnm(const Eigen::MatrixXd &prior, double delta, const SolverConfig &cfg)
{
    cfg.validate();
    if (!(delta >= 0.0))
        throw std::invalid_argument("solve_box_nnm: delta must be nonnegative");
    require_finite(prior, "solve_box_nnm");
    if (prior.size() == 0)
        throw std::invalid_argument("solve_box_nnm: empty prior");

    const double max_abs = prior.cwiseAbs().maxCoeff();
    const double feas_tol = cfg.feasibility_tol.value_or(1e-6 * (1.0 + max_abs));

    // Closed-form cases: a single feasible point, or a box containing zero.
    if (delta == 0.0 || delta >= max_abs)
    {
        CompletionResult res;
        res.solution = delta == 0.0 ? prior : Eigen::MatrixXd::Zero(prior.rows(), prior.cols());
        res.converged = true;
        res.max_violation = (res.solution - prior).cwiseAbs().maxCoeff() - delta;
        res.final_nuclear_norm = nuclear_norm(res.solution);
        return res;
    }

    const Eigen::MatrixXd lo = prior.array() - delta;
    const Eigen::MatrixXd hi = prior.array() + delta;
    auto project = [&](Eigen::MatrixXd &m) { m = m.cwiseMax(lo).cwiseMin(hi); };
    auto violation = [&](const Eigen::MatrixXd &m) { return (m - prior).cwiseAbs().maxCoeff() - delta; };

    return douglas_rachford(prior, cfg.penalty * rms(prior), feas_tol, cfg, project, violation);
}

CompletionResult solve_observed_nnm(const SampleMask &mask, const Eigen::MatrixXd &values, const SolverConfig &cfg)
{
    cfg.validate();
    mask.validate();
    const auto rows = static_cast<Eigen::Index>(mask.n_theta);
    const auto cols = static_cast<Eigen::Index>(mask.n_r);
    if (values.rows() != rows || values.cols() != cols)
        throw std::invalid_argument("solve_observed_nnm: value matrix shape does not match the mask");
    if (mask.size() == 0)
        throw std::invalid_argument("solve_observed_nnm: empty mask");

    std::vector<Eigen::Index> idx_i, idx_j;
    Eigen::MatrixXd start = Eigen::MatrixXd::Zero(rows, cols);
    double max_abs = 0.0;
    for (std::size_t i = 0; i < mask.n_theta; ++i)
        for (std::size_t j : mask.per_angle[i])
        {
            const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
            const double v = values(a, b);
            if (!std::isfinite(v))
                throw std::invalid_argument("solve_observed_nnm: non-finite observation");
            idx_i.push_back(a);
            idx_j.push_back(b);
            start(a, b) = v;
            max_abs = std::max(max_abs, std::abs(v));
        }
    const double feas_tol = cfg.feasibility_tol.value_or(1e-6 * (1.0 + max_abs));

    if (idx_i.size() == static_cast<std::size_t>(start.size()))
    {
        CompletionResult res;
        res.solution = start;
        res.converged = true;
        res.final_nuclear_norm = nuclear_norm(start);
        return res;
    }

    auto project = [&](Eigen::MatrixXd &m) {
        for (std::size_t k = 0; k < idx_i.size(); ++k)
            m(idx_i[k], idx_j[k]) = start(idx_i[k], idx_j[k]);
    };
    auto violation = [&](const Eigen::MatrixXd &m) {
        double v = 0.0;
        for (std::size_t k = 0; k < idx_i.size(); ++k)
            v = std::max(v, std::abs(m(idx_i[k], idx_j[k]) - start(idx_i[k], idx_j[k])));
        return v;
    };

    const double observed_rms = std::sqrt(start.squaredNorm() / static_cast<double>(idx_i.size()));
    return douglas_rachford(start, cfg.penalty * observed_rms, feas_tol, cfg, project, violation);
}

} // namespace nfmap
