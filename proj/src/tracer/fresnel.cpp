// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#include "tracer/fresnel.hpp"

#include "common/units.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace dmimo
{

ReflectionCoefficients fresnel_coefficients(const Material &material, double incidence, double carrier)
{
    if (material.is_perfect_conductor)
        return {-1.0, -1.0};

    using cd = std::complex<double>;
    const double lambda = wavelength(carrier);
    const cd eps(material.relative_permittivity, -60.0 * lambda * material.conductivity);
    const double c = std::cos(incidence);
    const double s = std::sin(incidence);
    const cd root = std::sqrt(eps - s * s);

    ReflectionCoefficients r;
    r.perpendicular = (c - root) / (c + root);
    r.parallel = (root - eps * c) / (root + eps * c);
    return r;
}

// Power series below |x| = 1.5, Lentz continued fraction for the
// complementary error function above.
std::pair<double, double> fresnel_integrals(double x)
{
    constexpr int max_iter = 200;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double fpmin = std::numeric_limits<double>::min() / eps;
    constexpr double big = std::numeric_limits<double>::max() * eps;
    constexpr double xmin = 1.5;
    constexpr double pi = std::numbers::pi;

    const double ax = std::abs(x);
    double c = 0.0;
    double s = 0.0;
    if (ax < std::sqrt(fpmin))
    {
        c = ax;
    }
    else if (ax <= xmin)
    {
        double sum = 0.0;
        double sums = 0.0;
        double sumc = ax;
        double sign = 1.0;
        const double fact = 0.5 * pi * ax * ax;
        bool odd = true;
        double term = ax;
        int n = 3;
        for (int k = 1; k <= max_iter; ++k)
        {
            term *= fact / k;
            sum += sign * term / n;
            const double test = std::abs(sum) * eps;
            if (odd)
            {
                sign = -sign;
                sums = sum;
                sum = sumc;
            }
            else
            {
                sumc = sum;
                sum = sums;
            }
            if (term < test)
                break;
            odd = !odd;
            n += 2;
        }
        s = sums;
        c = sumc;
    }
    else
    {
        using cd = std::complex<double>;
        const double pix2 = pi * ax * ax;
        cd b(1.0, -pix2);
        cd cc = big;
        cd d = 1.0 / b;
        cd h = d;
        int n = -1;
        for (int k = 2; k <= max_iter; ++k)
        {
            n += 2;
            const double a = -static_cast<double>(n) * (n + 1);
            b += 4.0;
            d = 1.0 / (a * d + b);
            cc = b + a / cc;
            const cd del = cc * d;
            h *= del;
            if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps)
                break;
        }
        h *= cd(ax, -ax);
        const cd cs = cd(0.5, 0.5) * (1.0 - cd(std::cos(0.5 * pix2), std::sin(0.5 * pix2)) * h);
        c = cs.real();
        s = cs.imag();
    }
    if (x < 0.0)
    {
        c = -c;
        s = -s;
    }
    return {c, s};
}

std::complex<double> knife_edge_coefficient(double nu)
{
    const auto [c, s] = fresnel_integrals(nu);
    const std::complex<double> tail(0.5 - c, -(0.5 - s));
    return std::complex<double>(0.5, 0.5) * tail;
}

double knife_edge_loss_db(double nu)
{
    return -amplitude_to_db(std::abs(knife_edge_coefficient(nu)));
}

double knife_edge_nu(double excess_length, double lambda, bool obstructed)
{
    const double nu = 2.0 * std::sqrt(std::max(excess_length, 0.0) / lambda);
    return obstructed ? nu : -nu;
}

} // namespace dmimo
