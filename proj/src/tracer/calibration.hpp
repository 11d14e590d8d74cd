// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

// Fits the XPR correction (factor, offset) so the per-ray XPR of traced
// paths matches the target statistics: mean equal to the ray-weighted class
// mean (LoS / NLoS links), standard deviation equal to target_std_db.

#include "tracer/tracer.hpp"

#include <span>
#include <vector>

namespace dmimo
{

struct CalibrationRay
{
    RayPath path;
    bool los_link = false;
    std::vector<InteractionDraw> draws;
};

struct XprStats
{
    double mean_db = 0.0;
    double std_db = 0.0;
    double target_mean_db = 0.0;
    std::size_t rays = 0;
};

struct CalibrationResult
{
    XprCalibration calibration;
    XprStats stats;
    int iterations = 0;
    bool converged = false;
};

// Statistics over rays with at least one interaction.
XprStats ray_xpr_statistics(std::span<const CalibrationRay> rays, const XprCalibration &cal);

// Fixed-point iteration: factor scales the spread, offset shifts the mean.
CalibrationResult calibrate_xpr(std::span<const CalibrationRay> rays, const XprCalibration &initial,
                                int max_iterations = 100, double tolerance_db = 1e-6);

} // namespace dmimo
