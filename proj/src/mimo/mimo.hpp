// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

// Single-user MIMO processing on per-RB channels.
//
// Link orientation: LinkChannel matrices are M x N (network antennas x UE
// antennas). The downlink channel seen by the UE is H^T (N x M); the uplink
// channel seen by the network is H itself.

#include "chanmodel/channel.hpp"
#include "numerics/linalg.hpp"
#include "scene/scene.hpp"

#include <span>
#include <vector>

namespace dmimo
{

enum class Precoder
{
    ZeroForcing,
    Svd
};

const char *precoder_name(Precoder p);

// Power allocation maximizing sum log2(1 + p_i g_i / n0) subject to
// sum p_i = total_power. Exact: inverse gains sorted, largest feasible active
// set chosen, water level mu = p_i + n0 / g_i on active layers.
std::vector<double> waterfill(std::span<const double> gains, double n0, double total_power);

double capacity_bits(std::span<const double> powers, std::span<const double> gains, double n0);

struct SvdPrecoding
{
    ComplexMatrix precoder;          // F: M x L, top-L right singular vectors
    ComplexMatrix combiner;          // W: L x N, top-L left singular vectors (conjugate transposed)
    std::vector<double> gains;       // sigma_i^2
};

// h is the channel as seen by the receiver (rows = receive antennas).
SvdPrecoding precode_svd(const ComplexMatrix &h, int layers);

struct ZfPrecoding
{
    ComplexMatrix precoder;    // M x L, unit-norm columns of the pseudo-inverse
    std::vector<double> gains; // 1 / ||f_i||^2 of the unnormalized columns
};

// Uses the first `layers` receive antennas. Throws SingularChannel when
// those rows have rank below `layers`.
ZfPrecoding precode_zf(const ComplexMatrix &h, int layers);

struct CapacityResult
{
    std::vector<double> per_rb_bits_per_hz;
    double mean_bits_per_hz = 0.0;
    std::vector<std::vector<double>> per_layer_sinr_db;
    int singular_rbs = 0; // RBs counted as zero capacity
};

struct DlOptions
{
    Precoder precoder = Precoder::Svd;
    int layers = 2;
    double total_power_dbm = 23.0; // network sum power, split evenly over RBs
    double n0_dbm_per_rb = -118.0;
    // When set, a rank-deficient RB under ZF contributes zero capacity
    // instead of throwing SingularChannel.
    bool singular_as_zero = false;
};

CapacityResult dl_capacity(const LinkChannel &link, const DlOptions &options);

// Centralized ZF detection with uniform per-antenna power (no precoding at
// the UE): SINR_i = p / (n0 [(H^H H)^-1]_ii). power_per_antenna_mw is the
// per-RB transmit power of each UE antenna. A rank-deficient RB contributes
// zero capacity and is counted in singular_rbs.
CapacityResult ul_zf_capacity(const LinkChannel &link, double power_per_antenna_mw, double n0_mw);

// Received stream powers of one RB: power_per_antenna_mw * sigma_i^2.
std::vector<double> stream_powers_dbm(const ComplexMatrix &h, double power_per_antenna_mw);

// Number of streams whose received power reaches threshold_dbm.
int stream_rank(const ComplexMatrix &h, double power_per_antenna_mw, double threshold_dbm);

} // namespace dmimo
