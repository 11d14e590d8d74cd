// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

// Counter-based random streams. A stream is identified by a key built from
// (global seed, ids...) and draws are a pure function of (key, counter), so
// results never depend on evaluation order or worker count.
//
// Distributions are implemented here rather than through <random> because
// the standard distributions are not bit-reproducible across library vendors.

#include <complex>
#include <cstdint>
#include <initializer_list>

namespace dmimo
{

std::uint64_t splitmix64(std::uint64_t x);

class StreamRng
{
  public:
    explicit StreamRng(std::uint64_t key) : key_(key) {}

    // Folds every part into the key, order-sensitive.
    static StreamRng keyed(std::initializer_list<std::uint64_t> parts);

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double uniform();

    // Standard normal (Box-Muller, both outputs used).
    double normal();

    // Circularly-symmetric CN(0, 1): E|z|^2 = 1.
    std::complex<double> complex_normal();

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace dmimo
