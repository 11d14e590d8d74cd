// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

// Per-RB MIMO channel matrices. H_k(m, n) couples network antenna m (rows,
// stacked over APs in ap_ids order) with UE antenna n (columns); the
// downlink channel seen by the UE is the transpose.

#include "numerics/linalg.hpp"
#include "scene/scene.hpp"
#include "tracer/tracer.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace dmimo
{

enum class ChannelModel : std::uint8_t
{
    RayTracing = 0,
    Rayleigh = 1
};

const char *channel_model_name(ChannelModel model);

struct LinkChannel
{
    std::vector<int> ap_ids;
    int ue_id = 0;
    ChannelModel model = ChannelModel::RayTracing;
    std::vector<ComplexMatrix> per_rb;
    std::vector<double> rb_center_frequencies;
    bool empty = false; // no path survived pruning; matrices are zero

    Eigen::Index rows() const { return per_rb.empty() ? 0 : per_rb.front().rows(); }
    Eigen::Index cols() const { return per_rb.empty() ? 0 : per_rb.front().cols(); }
    // Mean |H|^2 over RBs and antenna pairs.
    double mean_power() const;
};

// Antenna XPD as a fixed row-normalized leakage [[1, k], [k, 1]],
// k = 10^(-xpd/20).
Mat2c xpd_leakage(double xpd_db);

// Sums every path's field over the array elements at each RB centre.
// Transmit side is the AP (rows), receive side the UE (columns).
LinkChannel assemble_rt_channel(std::span<const RayPath> paths, const ArrayConfig &ap_array,
                                const ArrayConfig &ue_array, const RadioConfig &radio, int ap_id, int ue_id);

// H_k(n, m) = |H^RT_k(n, m)| * s, s ~ CN(0, 1) drawn from a stream keyed by
// (seed, ap id, ue id, k, row within the AP block, column). Stacked links are
// handled block by block, so synthesizing then stacking equals stacking then
// synthesizing.
LinkChannel synthesize_rayleigh(const LinkChannel &rt, std::uint64_t seed);

// Largest frequency lag over which the normalized frequency autocorrelation
// (power-weighted over antenna pairs) stays >= threshold, with linear
// interpolation between RB lags. A channel that never decorrelates returns
// the full grid span. Throws DegenerateChannel for an all-zero link.
double coherence_bandwidth(const LinkChannel &link, double correlation_threshold = 0.9);

// Row-stacks links of one UE in the given order. Throws MissingEntry on an
// empty list and ConfigError on mismatched grids or UE antenna counts.
LinkChannel stack_links(std::span<const LinkChannel *const> links);

} // namespace dmimo
