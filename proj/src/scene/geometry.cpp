// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#include "scene/geometry.hpp"

#include <algorithm>
#include <limits>

namespace dmimo
{

bool inside_open(const Box &box, const Vec3 &p)
{
    for (int i = 0; i < 3; ++i)
        if (!(p[i] > box.min[i] && p[i] < box.max[i]))
            return false;
    return true;
}

bool inside_closed(const Box &box, const Vec3 &p, double tol)
{
    for (int i = 0; i < 3; ++i)
        if (p[i] < box.min[i] - tol || p[i] > box.max[i] + tol)
            return false;
    return true;
}

bool box_within(const Box &inner, const Box &outer)
{
    for (int i = 0; i < 3; ++i)
        if (inner.min[i] < outer.min[i] || inner.max[i] > outer.max[i])
            return false;
    return true;
}

bool segment_hits_open_box(const Box &box, const Vec3 &a, const Vec3 &b, double min_length)
{
    const Vec3 d = b - a;
    const double length = d.norm();
    if (length == 0.0)
        return inside_open(box, a);

    double t0 = 0.0;
    double t1 = 1.0;
    for (int i = 0; i < 3; ++i)
    {
        if (d[i] == 0.0)
        {
            // Parallel to the slab: must sit strictly between the planes.
            if (!(a[i] > box.min[i] && a[i] < box.max[i]))
                return false;
            continue;
        }
        double ta = (box.min[i] - a[i]) / d[i];
        double tb = (box.max[i] - a[i]) / d[i];
        if (ta > tb)
            std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t1 <= t0)
            return false;
    }
    return (t1 - t0) * length > min_length;
}

} // namespace dmimo
