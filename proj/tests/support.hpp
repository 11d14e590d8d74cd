// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

// Shared helpers for the unit tests.

#include "numerics/linalg.hpp"
#include "scene/scene.hpp"

#include <complex>
#include <filesystem>
#include <random>
#include <string>

namespace dmimo::test
{

inline ComplexMatrix random_matrix(std::mt19937_64 &gen, Eigen::Index rows, Eigen::Index cols)
{
    std::normal_distribution<double> n(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = {n(gen), n(gen)};
    return m;
}

// Rank-r matrix as a product of random factors.
inline ComplexMatrix random_rank(std::mt19937_64 &gen, Eigen::Index rows, Eigen::Index cols, Eigen::Index r)
{
    return random_matrix(gen, rows, r) * random_matrix(gen, r, cols);
}

inline double rel_err(const ComplexMatrix &a, const ComplexMatrix &b)
{
    const double scale = std::max(a.norm(), b.norm());
    return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

inline SceneDescription empty_room(double x, double y, double z)
{
    SceneDescription d;
    d.bounds = Box{Vec3::Zero(), Vec3(x, y, z)};
    return d;
}

inline std::filesystem::path temp_dir(const std::string &name)
{
    auto p = std::filesystem::temp_directory_path() / ("dmimo_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

} // namespace dmimo::test
