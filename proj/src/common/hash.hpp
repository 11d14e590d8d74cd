// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

// 64-bit FNV-1a, used for scene/config/file digests. Doubles are hashed by
// their bit pattern so digests are exact.

#include <bit>
#include <cstdint>
#include <string_view>

namespace dmimo
{

class Fnv1a
{
  public:
    Fnv1a &bytes(const void *data, std::size_t size)
    {
        auto p = static_cast<const unsigned char *>(data);
        for (std::size_t i = 0; i < size; ++i)
        {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
        return *this;
    }

    Fnv1a &text(std::string_view s)
    {
        bytes(s.data(), s.size());
        return u64(s.size());
    }

    Fnv1a &u64(std::uint64_t v)
    {
        unsigned char b[8];
        for (int i = 0; i < 8; ++i)
            b[i] = static_cast<unsigned char>(v >> (8 * i));
        return bytes(b, 8);
    }

    Fnv1a &i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
    Fnv1a &f64(double v) { return u64(std::bit_cast<std::uint64_t>(v)); }

    std::uint64_t value() const { return state_; }

  private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t fnv1a(std::string_view s)
{
    Fnv1a h;
    h.bytes(s.data(), s.size());
    return h.value();
}

} // namespace dmimo
