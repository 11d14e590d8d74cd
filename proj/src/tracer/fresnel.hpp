// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

#include "scene/scene.hpp"

#include <complex>
#include <utility>

namespace dmimo
{

struct ReflectionCoefficients
{
    std::complex<double> parallel;      // E field in the plane of incidence (TM)
    std::complex<double> perpendicular; // E field normal to the plane of incidence (TE)
};

// Fresnel reflection off a half-space with complex permittivity
// eps_r - j*sigma/(omega*eps0). Sign convention: both coefficients agree at
// normal incidence, so a perfect conductor gives -1 for both.
// incidence is measured from the surface normal, 0 <= incidence < pi/2.
ReflectionCoefficients fresnel_coefficients(const Material &material, double incidence, double carrier);

// Fresnel integrals C(x) = int_0^x cos(pi t^2 / 2) dt, S(x) likewise with sin.
std::pair<double, double> fresnel_integrals(double x);

// Knife-edge diffraction field relative to free space,
// F(nu) = (1+j)/2 * int_nu^inf exp(-j pi t^2 / 2) dt.
// |F(0)| = 1/2; F -> 1 as nu -> -inf (clear path).
std::complex<double> knife_edge_coefficient(double nu);

// Diffraction loss in dB, -20 log10 |F(nu)|.
double knife_edge_loss_db(double nu);

// Fresnel-Kirchhoff parameter from the excess path length of the bent path
// over the direct one: nu = sign * 2 sqrt(excess / lambda), positive when the
// edge obstructs the direct line.
double knife_edge_nu(double excess_length, double lambda, bool obstructed);

} // namespace dmimo
