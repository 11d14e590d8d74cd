// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#include "tracer/tracer.hpp"

#include "common/units.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

namespace dmimo
{

double XprCalibration::corrected_xpr_db(bool los_class, double standard_normal) const
{
    const double mean = los_class ? target_mean_los_db : target_mean_nlos_db;
    return factor * (mean + target_std_db * standard_normal) + offset;
}

std::vector<InteractionDraw> draw_interactions(const RayPath &path, const LinkStream &stream, int path_index)
{
    std::vector<InteractionDraw> draws(path.interactions.size());
    for (std::size_t i = 0; i < draws.size(); ++i)
    {
        auto rng = StreamRng::keyed({stream.seed, static_cast<std::uint64_t>(stream.ap_id),
                                     static_cast<std::uint64_t>(stream.ue_id), static_cast<std::uint64_t>(path_index),
                                     static_cast<std::uint64_t>(i)});
        draws[i].standard_normal = rng.normal();
        draws[i].phase_vh = 2.0 * std::numbers::pi * rng.uniform();
        draws[i].phase_hv = 2.0 * std::numbers::pi * rng.uniform();
    }
    return draws;
}

Mat2c xpr_leakage(double xpr_db, double phase_vh, double phase_hv)
{
    if (xpr_db == std::numeric_limits<double>::infinity())
        return Mat2c::Identity();
    const double rho = db_to_amplitude(-xpr_db);
    const double norm = 1.0 / std::sqrt(1.0 + rho * rho);
    Mat2c m;
    m(0, 0) = norm;
    m(1, 1) = norm;
    m(0, 1) = norm * std::polar(rho, phase_vh);
    m(1, 0) = norm * std::polar(rho, phase_hv);
    return m;
}

Mat2c polarization_product(const RayPath &path, std::span<const double> xpr_db, std::span<const InteractionDraw> draws)
{
    Mat2c g = Mat2c::Identity();
    for (std::size_t i = 0; i < path.interactions.size(); ++i)
    {
        const auto &in = path.interactions[i];
        const Mat2c fresnel = Eigen::DiagonalMatrix<std::complex<double>, 2>(in.coeff_v, in.coeff_h);
        g = xpr_leakage(xpr_db[i], draws[i].phase_vh, draws[i].phase_hv) * fresnel * g;
    }
    return g;
}

Mat2c path_polarization(const RayPath &path, const XprCalibration &cal, bool los_link,
                        std::span<const InteractionDraw> draws)
{
    std::vector<double> xpr(path.interactions.size());
    for (std::size_t i = 0; i < xpr.size(); ++i)
        xpr[i] = cal.corrected_xpr_db(los_link, draws[i].standard_normal);
    return polarization_product(path, xpr, draws);
}

double ray_xpr_db(const Mat2c &gain)
{
    const double co = std::norm(gain(0, 0)) + std::norm(gain(1, 1));
    const double cross = std::norm(gain(0, 1)) + std::norm(gain(1, 0));
    if (cross == 0.0)
        return std::numeric_limits<double>::infinity();
    return power_to_db(co / cross);
}

Mat2c path_field(const RayPath &path, double frequency, double carrier)
{
    const double spread = wavelength(carrier) / (4.0 * std::numbers::pi * path.length);
    const std::complex<double> phase = std::polar(1.0, -2.0 * std::numbers::pi * frequency * path.delay);
    return path.pol_gain * (spread * phase);
}

void write_path_dump(std::ostream &out, const std::vector<RayPath> &paths)
{
    out << "# path_id kinds length_m delay_s vv_re vv_im vh_re vh_im hv_re hv_im hh_re hh_im\n";
    char buf[512];
    for (std::size_t i = 0; i < paths.size(); ++i)
    {
        const auto &p = paths[i];
        const auto &g = p.pol_gain;
        std::snprintf(buf, sizeof buf, "%zu %s %.12g %.12g %.12g %.12g %.12g %.12g %.12g %.12g %.12g %.12g\n", i,
                      p.kind_string().c_str(), p.length, p.delay, g(0, 0).real(), g(0, 0).imag(), g(0, 1).real(),
                      g(0, 1).imag(), g(1, 0).real(), g(1, 0).imag(), g(1, 1).real(), g(1, 1).imag());
        out << buf;
    }
}

} // namespace dmimo
