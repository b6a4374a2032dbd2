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
#include <stdexcept>
#include <string>

namespace nfmap
{

// Bad input values raise std::invalid_argument. The types below cover
// numerical failures that callers may want to catch separately.

// A fitted linear system is too close to singular to trust.
class IllConditionedError : public std::runtime_error
{
public:
    IllConditionedError(const std::string &what, std::size_t slice_index, double condition)
        : std::runtime_error(what), slice_index_(slice_index), condition_(condition) {}

    std::size_t slice_index() const noexcept { return slice_index_; }
    double condition() const noexcept { return condition_; }

private:
    std::size_t slice_index_;
    double condition_;
};

// A slice has too few samples for the requested operation.
class DegenerateSliceError : public std::runtime_error
{
public:
    DegenerateSliceError(const std::string &what, std::size_t slice_index)
        : std::runtime_error(what), slice_index_(slice_index) {}

    std::size_t slice_index() const noexcept { return slice_index_; }

private:
    std::size_t slice_index_;
};

} // namespace nfmap
