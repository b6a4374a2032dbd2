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

#include <cstdint>
#include <initializer_list>

namespace nfmap
{

// Counter-based generator built on the SplitMix64 mixing function
// (Steele, Lea & Flood 2014). Output k of a stream with key s is
// mix64(s + (k + 1) * 0x9E3779B97F4A7C15), so the sequence is fully defined
// by the seed and identical on every platform. Uniform doubles take the top
// 53 bits; normals use the Box-Muller transform (both outputs are used).
class Rng
{
public:
    explicit Rng(std::uint64_t seed) noexcept : key_(seed) {}

    std::uint64_t next_u64() noexcept;

    // Uniform on [0, 1).
    double uniform() noexcept;

    // Uniform on (0, 1), never exactly 0.
    double uniform_open() noexcept;

    // Standard normal N(0, 1).
    double normal() noexcept;

    // Uniform integer in [0, bound), bound > 0. Uses rejection to avoid modulo bias.
    std::uint64_t below(std::uint64_t bound) noexcept;

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Deterministic sub-stream seed from a parent seed and a list of keys,
// e.g. derive_seed(seed, {i, j}) for a per-cell stream.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept;

} // namespace nfmap
