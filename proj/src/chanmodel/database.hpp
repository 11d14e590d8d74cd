// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

// Channel sample database: one single-AP LinkChannel per (AP, UE) pair.
//
// Binary layout (little-endian):
//   char[4]  magic "DMCH"
//   u16      version (1)
//   u32      M (antennas per AP), u32 N (UE antennas), u32 rb_count
//   u8       model tag (0 = RT, 1 = Rayleigh)
//   u64      seed, u64 scene digest
//   f64      carrier frequency (Hz)
//   u32      AP count A, u32 UE count U
//   i32[A]   AP ids, i32[U] UE ids
//   f64[rb]  RB centre frequencies
//   u8[A*U]  empty-link flags, AP-major
//   f64[2 * A*U*rb*M*N] (re, im) in (ap, ue, rb, row, column) order

#include "chanmodel/channel.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dmimo
{

inline constexpr std::uint16_t database_version = 1;

struct ChannelDatabase
{
    std::uint64_t scene_digest = 0;
    std::uint64_t seed = 0;
    ChannelModel model = ChannelModel::RayTracing;
    double carrier_frequency = 0.0;
    std::vector<double> rb_center_frequencies;
    std::uint32_t ap_antennas = 0;
    std::uint32_t ue_antennas = 0;
    std::vector<int> ap_ids;
    std::vector<int> ue_ids;
    std::map<std::pair<int, int>, LinkChannel> entries; // (ap, ue)

    // Throws MissingEntry.
    const LinkChannel &at(int ap_id, int ue_id) const;
    bool complete() const;

    bool operator==(const ChannelDatabase &other) const;
};

// Throws IoError.
void save_database(const ChannelDatabase &db, const std::string &path);

// Throws IoError, FormatError (bad magic/version/size) and DigestMismatch when
// expected_scene_digest is given and differs.
ChannelDatabase load_database(const std::string &path, std::optional<std::uint64_t> expected_scene_digest = std::nullopt);

// Row-stacks the single-AP entries of one UE in ap_ids order.
LinkChannel stack_channels(const ChannelDatabase &db, std::span<const int> ap_ids, int ue_id);

// Rayleigh counterpart of every entry.
ChannelDatabase synthesize_rayleigh_database(const ChannelDatabase &rt, std::uint64_t seed);

} // namespace dmimo
