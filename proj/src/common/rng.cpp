// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#include "common/rng.hpp"

#include <cmath>
#include <numbers>

namespace dmimo
{

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

StreamRng StreamRng::keyed(std::initializer_list<std::uint64_t> parts)
{
    std::uint64_t key = 0x6a09e667f3bcc909ULL;
    for (auto p : parts)
        key = splitmix64(key ^ splitmix64(p));
    return StreamRng(key);
}

std::uint64_t StreamRng::next_u64()
{
    ++counter_;
    return splitmix64(key_ ^ splitmix64(counter_ * 0xd1b54a32d192ed03ULL));
}

double StreamRng::uniform()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double StreamRng::normal()
{
    if (has_spare_)
    {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0)
        u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
}

std::complex<double> StreamRng::complex_normal()
{
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

} // namespace dmimo
