// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

// Deterministic polarimetric ray tracer for box-shaped indoor scenes.
//
// Paths are enumerated as interaction sequences (LoS, specular reflections on
// room walls and obstacle faces, knife-edge diffraction on obstacle edges) and
// solved with the image method. Every path carries a 2x2 polarimetric gain in
// the (V, H) basis; the free-space spreading and propagation phase are applied
// per frequency by path_field().

#include "common/rng.hpp"
#include "scene/scene.hpp"

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dmimo
{

using Mat2c = Eigen::Matrix2cd;

enum class InteractionKind
{
    Reflection,
    Diffraction
};

struct Interaction
{
    InteractionKind kind = InteractionKind::Reflection;
    int element = 0;         // facet id (reflection) or edge id (diffraction)
    Vec3 point = Vec3::Zero();
    double incidence = 0.0;  // rad; from the normal, or from the edge for diffraction
    double nu = 0.0;         // knife-edge parameter, diffraction only
    std::complex<double> coeff_v = 1.0;
    std::complex<double> coeff_h = 1.0;
};

struct RayPath
{
    std::vector<Interaction> interactions;
    double length = 0.0; // m
    double delay = 0.0;  // s
    Mat2c pol_gain = Mat2c::Identity();
    bool is_los = false;
    Vec3 departure = Vec3::UnitX(); // unit, leaving the transmitter
    Vec3 arrival = Vec3::UnitX();   // unit, propagation direction at the receiver

    int reflection_count() const;
    int diffraction_count() const;
    // Sum of -20 log10 max(|coeff_v|, |coeff_h|) over interactions.
    double interaction_loss_db() const;
    // "LOS", or the kind sequence such as "RRD".
    std::string kind_string() const;
};

struct TraceBudget
{
    int max_reflections = 2;
    int max_diffractions = 1;
    double max_path_loss_db = 170.0;
};

// Per-interaction XPR model: raw draws ~ N(target mean, target std) in dB,
// corrected as factor * raw + offset.
struct XprCalibration
{
    double factor = 1.0;
    double offset = 0.0; // dB
    double target_mean_los_db = 12.0;
    double target_mean_nlos_db = 11.0;
    double target_std_db = 6.0;

    double corrected_xpr_db(bool los_class, double standard_normal) const;
};

// Identifies the random stream family of one AP-UE link.
struct LinkStream
{
    std::uint64_t seed = 0;
    int ap_id = 0;
    int ue_id = 0;
};

// Mirror of the point across the facet plane.
Vec3 image_reflect(const Facet &facet, const Vec3 &point);

// Geometry-only trace: paths with Fresnel / knife-edge diagonal gains and no
// XPR leakage. LoS first, then by interaction count in enumeration order.
std::vector<RayPath> trace_geometry(const Scene &scene, const Vec3 &ap, const Vec3 &ue, const TraceBudget &budget);

// Full trace with calibrated per-interaction XPR leakage. Deterministic in
// (scene, endpoints, budget, calibration, stream).
std::vector<RayPath> trace_link(const Scene &scene, const Vec3 &ap, const Vec3 &ue, const TraceBudget &budget,
                                const XprCalibration &cal, const LinkStream &stream);

// ---- Polarization -----------------------------------------------------------

struct InteractionDraw
{
    double standard_normal = 0.0;
    double phase_vh = 0.0;
    double phase_hv = 0.0;
};

// Random numbers of every interaction of a path, keyed by
// (seed, ap, ue, path index, interaction index).
std::vector<InteractionDraw> draw_interactions(const RayPath &path, const LinkStream &stream, int path_index);

// Row-normalized leakage [[1, rho e^{j a}], [rho e^{j b}, 1]],
// rho = 10^(-xpr/20). xpr = +inf gives the identity.
Mat2c xpr_leakage(double xpr_db, double phase_vh, double phase_hv);

// Product over interactions of leakage * diag(coeff_v, coeff_h), later
// interactions on the left.
Mat2c polarization_product(const RayPath &path, std::span<const double> xpr_db, std::span<const InteractionDraw> draws);

// Link classification decides the XPR class (LoS link -> LoS mean).
Mat2c path_polarization(const RayPath &path, const XprCalibration &cal, bool los_link,
                        std::span<const InteractionDraw> draws);

// Co-polar over cross-polar power of a 2x2 gain, in dB (+inf when no leakage).
double ray_xpr_db(const Mat2c &gain);

// pol_gain * lambda_c / (4 pi length) * exp(-j 2 pi f delay). Spreading uses
// the carrier wavelength so magnitudes are flat across the RB grid.
Mat2c path_field(const RayPath &path, double frequency, double carrier);

// Columnar text dump: path id, kinds, length, delay, 4 complex pol entries.
void write_path_dump(std::ostream &out, const std::vector<RayPath> &paths);

} // namespace dmimo
