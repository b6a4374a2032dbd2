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

#include <cstddef>

#include <Eigen/Core>

namespace nfmap
{

// ||10^(Z/10) - 10^(Zhat/10)||_F^2 / ||10^(Z/10)||_F^2, i.e. the error in
// linear power. Throws std::invalid_argument on shape mismatch or non-finite input.
double nmse(const Eigen::MatrixXd &truth, const Eigen::MatrixXd &estimate);

// Share of the singular-value sum carried by the K largest values, 1 <= K <= min(I, J).
double singular_energy(const Eigen::MatrixXd &m, std::size_t k);

// Elementwise 10^(x/10).
Eigen::MatrixXd db_to_linear(const Eigen::MatrixXd &db);

} // namespace nfmap
