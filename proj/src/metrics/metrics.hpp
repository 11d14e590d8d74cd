// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

// Coverage metrics per UE and empirical distributions.

#include "chanmodel/channel.hpp"
#include "scene/scene.hpp"

#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace dmimo
{

// (AP id, value) pairs; order is irrelevant, ties resolve to the lower id.
using ApValue = std::pair<int, double>;

// RSRP per AP block of the link: reference power per AP antenna plus the
// wideband mean channel gain 10 log10(mean |H|^2) over RBs and antenna
// pairs of that block. A zero block yields -inf.
std::vector<double> rsrp_dbm(const LinkChannel &link, double per_antenna_reference_dbm);

// Convenience: RSRP of a single-AP link under a Tx power model with
// active_aps APs switched on.
double rsrp_dbm(const LinkChannel &link, const TxPowerModel &tx, std::size_t active_aps);

struct DetectionStats
{
    int best_server = -1;
    int detected = 0;
    double relative_2nd_db = -std::numeric_limits<double>::infinity();
    double relative_3rd_db = -std::numeric_limits<double>::infinity();
};

DetectionStats detection_stats(std::span<const ApValue> rsrp, double threshold_dbm);

// Active APs of the deployment with an unobstructed segment to the UE.
int los_count(const Scene &scene, const Deployment &deployment, const Vec3 &ue);

// The b strongest APs, strongest first, ties by lower id.
std::vector<int> select_aps(std::span<const ApValue> rsrp, std::size_t b);

// Empirical distribution with the lower-interpolation percentile rule.
class DistributionTable
{
  public:
    const std::vector<double> &sorted() const { return sorted_; }
    std::size_t size() const { return sorted_.size(); }

    // Fraction of samples <= x.
    double cdf(double x) const;
    double ccdf(double x) const { return 1.0 - cdf(x); }
    // sorted[floor(p * (n - 1))], p in [0, 1].
    double percentile(double p) const;
    double median() const { return percentile(0.5); }
    double mean() const;

    friend DistributionTable aggregate(std::span<const double> values);

  private:
    std::vector<double> sorted_;
};

// Throws EmptyInput on an empty list.
DistributionTable aggregate(std::span<const double> values);

} // namespace dmimo
