// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

#include <Eigen/Core>

namespace dmimo
{

using Vec3 = Eigen::Vector3d;

// Axis-aligned box, min <= max componentwise.
struct Box
{
    Vec3 min = Vec3::Zero();
    Vec3 max = Vec3::Zero();

    Vec3 size() const { return max - min; }
    Vec3 center() const { return 0.5 * (min + max); }
};

// Strict interior test.
bool inside_open(const Box &box, const Vec3 &p);

// Closed test (boundary counts as inside), with tolerance tol.
bool inside_closed(const Box &box, const Vec3 &p, double tol = 0.0);

// True when box a lies within box b (closed).
bool box_within(const Box &inner, const Box &outer);

// True iff the segment a->b crosses the open interior of the box over a
// length greater than min_length (slab method). Grazing contact along a face,
// edge or corner is not an intersection.
bool segment_hits_open_box(const Box &box, const Vec3 &a, const Vec3 &b, double min_length = 1e-9);

} // namespace dmimo
