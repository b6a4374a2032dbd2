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

#include "nfmap/metrics.hpp"

#include "nfmap/lowrank.hpp"

#include <cmath>
#include <stdexcept>

namespace nfmap
{

Eigen::MatrixXd db_to_linear(const Eigen::MatrixXd &db)
{
    return db.unaryExpr([](double x) { return std::pow(10.0, x / 10.0); });
}

double nmse(const Eigen::MatrixXd &truth, const Eigen::MatrixXd &estimate)
{
    if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols())
        throw std::invalid_argument("nmse: shape mismatch");
    if (!truth.allFinite() || !estimate.allFinite())
        throw std::invalid_argument("nmse: non-finite entries");
    const Eigen::MatrixXd a = db_to_linear(truth);
    const Eigen::MatrixXd b = db_to_linear(estimate);
    const double den = a.squaredNorm();
    if (!(den > 0.0))
        throw std::invalid_argument("nmse: reference has zero energy");
    return (a - b).squaredNorm() / den;
}

double singular_energy(const Eigen::MatrixXd &m, std::size_t k)
{
    const auto n = static_cast<std::size_t>(std::min(m.rows(), m.cols()));
    if (k < 1 || k > n)
        throw std::invalid_argument("singular_energy: K out of range");
    const Eigen::VectorXd s = singular_values(m);
    const double total = s.sum();
    if (!(total > 0.0))
        throw std::invalid_argument("singular_energy: zero matrix");
    return std::min(1.0, s.head(static_cast<Eigen::Index>(k)).sum() / total);
}

} // namespace nfmap
