// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#include "metrics/metrics.hpp"

#include "common/error.hpp"
#include "common/units.hpp"

#include <algorithm>
#include <cmath>

namespace dmimo
{

std::vector<double> rsrp_dbm(const LinkChannel &link, double per_antenna_reference_dbm)
{
    const std::size_t aps = std::max<std::size_t>(link.ap_ids.size(), 1);
    const Eigen::Index block = link.rows() / static_cast<Eigen::Index>(aps);
    std::vector<double> out;
    for (std::size_t a = 0; a < aps; ++a)
    {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto &h : link.per_rb)
        {
            sum += h.middleRows(static_cast<Eigen::Index>(a) * block, block).squaredNorm();
            count += static_cast<std::size_t>(block * h.cols());
        }
        const double mean = count ? sum / static_cast<double>(count) : 0.0;
        out.push_back(mean > 0.0 ? per_antenna_reference_dbm + power_to_db(mean)
                                 : -std::numeric_limits<double>::infinity());
    }
    return out;
}

double rsrp_dbm(const LinkChannel &link, const TxPowerModel &tx, std::size_t active_aps)
{
    const double ref = tx.per_antenna_dbm(active_aps, static_cast<std::size_t>(link.rows()));
    return rsrp_dbm(link, ref).front();
}

namespace
{

std::vector<ApValue> ranked(std::span<const ApValue> values)
{
    std::vector<ApValue> v(values.begin(), values.end());
    std::sort(v.begin(), v.end(), [](const ApValue &a, const ApValue &b) {
        if (a.second != b.second)
            return a.second > b.second;
        return a.first < b.first;
    });
    return v;
}

} // namespace

DetectionStats detection_stats(std::span<const ApValue> rsrp, double threshold_dbm)
{
    DetectionStats s;
    if (rsrp.empty())
        return s;
    const auto v = ranked(rsrp);
    s.best_server = v[0].first;
    for (const auto &[id, value] : v)
        if (value >= threshold_dbm)
            ++s.detected;
    auto relative = [&](std::size_t i) {
        if (i >= v.size() || !std::isfinite(v[i].second) || !std::isfinite(v[0].second))
            return -std::numeric_limits<double>::infinity();
        return v[i].second - v[0].second;
    };
    s.relative_2nd_db = relative(1);
    s.relative_3rd_db = relative(2);
    return s;
}

int los_count(const Scene &scene, const Deployment &deployment, const Vec3 &ue)
{
    int n = 0;
    for (int id : deployment.active_ap_ids)
        if (!los_blocked(scene, deployment.ap(id).position, ue))
            ++n;
    return n;
}

std::vector<int> select_aps(std::span<const ApValue> rsrp, std::size_t b)
{
    if (b > rsrp.size())
        throw ConfigError("cannot select " + std::to_string(b) + " APs among " + std::to_string(rsrp.size()));
    const auto v = ranked(rsrp);
    std::vector<int> out;
    for (std::size_t i = 0; i < b; ++i)
        out.push_back(v[i].first);
    return out;
}

DistributionTable aggregate(std::span<const double> values)
{
    if (values.empty())
        throw EmptyInput("cannot aggregate an empty sample");
    DistributionTable t;
    t.sorted_.assign(values.begin(), values.end());
    std::sort(t.sorted_.begin(), t.sorted_.end());
    return t;
}

double DistributionTable::cdf(double x) const
{
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double DistributionTable::percentile(double p) const
{
    p = std::clamp(p, 0.0, 1.0);
    const auto idx = static_cast<std::size_t>(std::floor(p * static_cast<double>(sorted_.size() - 1)));
    return sorted_[idx];
}

double DistributionTable::mean() const
{
    double s = 0.0;
    for (double v : sorted_)
        s += v;
    return s / static_cast<double>(sorted_.size());
}

} // namespace dmimo
