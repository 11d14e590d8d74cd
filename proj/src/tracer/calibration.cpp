// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#include "tracer/calibration.hpp"

#include "common/error.hpp"

#include <cmath>

namespace dmimo
{

XprStats ray_xpr_statistics(std::span<const CalibrationRay> rays, const XprCalibration &cal)
{
    XprStats st;
    double sum = 0.0;
    double sum_sq = 0.0;
    double target = 0.0;
    for (const auto &r : rays)
    {
        if (r.path.interactions.empty())
            continue;
        const double x = ray_xpr_db(path_polarization(r.path, cal, r.los_link, r.draws));
        if (!std::isfinite(x))
            continue;
        sum += x;
        sum_sq += x * x;
        target += r.los_link ? cal.target_mean_los_db : cal.target_mean_nlos_db;
        ++st.rays;
    }
    if (st.rays == 0)
        return st;
    const double n = static_cast<double>(st.rays);
    st.mean_db = sum / n;
    st.std_db = st.rays > 1 ? std::sqrt(std::max(0.0, (sum_sq - n * st.mean_db * st.mean_db) / (n - 1.0))) : 0.0;
    st.target_mean_db = target / n;
    return st;
}

CalibrationResult calibrate_xpr(std::span<const CalibrationRay> rays, const XprCalibration &initial,
                                int max_iterations, double tolerance_db)
{
    CalibrationResult res;
    res.calibration = initial;
    XprStats st = ray_xpr_statistics(rays, res.calibration);
    if (st.rays < 2)
        throw EmptyInput("XPR calibration needs at least two rays with interactions");

    for (int it = 1; it <= max_iterations; ++it)
    {
        res.iterations = it;
        auto &cal = res.calibration;
        if (st.std_db > 0.0)
            cal.factor *= cal.target_std_db / st.std_db;
        cal.offset += st.target_mean_db - st.mean_db;
        st = ray_xpr_statistics(rays, cal);
        if (std::abs(st.mean_db - st.target_mean_db) < tolerance_db && std::abs(st.std_db - cal.target_std_db) < tolerance_db)
        {
            res.converged = true;
            break;
        }
    }
    res.stats = st;
    return res;
}

} // namespace dmimo
