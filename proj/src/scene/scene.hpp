// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

// Indoor environment: room bounds, box obstacles, materials, radio grid,
// antenna arrays and AP/UE deployments. Everything here is immutable after
// construction and safe to share across worker threads.

#include "scene/geometry.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dmimo
{

struct Material
{
    std::string name;
    double relative_permittivity = 1.0;
    double conductivity = 0.0; // S/m
    bool is_perfect_conductor = false;
};

// Room facets, indexed as below.
enum class RoomFacet : int
{
    XMin = 0,
    XMax,
    YMin,
    YMax,
    Floor,
    Ceiling
};

struct ObstacleSpec
{
    std::string name;
    Box box;
    std::string material;
};

struct RadioConfig
{
    double carrier_frequency = 3.7e9;   // Hz
    double bandwidth = 20e6;            // Hz
    int rb_count = 52;
    int subcarriers_per_rb = 12;
    double subcarrier_spacing = 30e3;   // Hz

    double rb_width() const { return subcarriers_per_rb * subcarrier_spacing; }
    double wavelength() const;
    // RB centre frequencies, symmetric around the carrier.
    std::vector<double> rb_center_frequencies() const;
};

// Raw, unvalidated scene input.
struct SceneDescription
{
    Box bounds;
    std::vector<Material> materials;
    // Material name per room facet (XMin, XMax, YMin, YMax, Floor, Ceiling).
    std::array<std::string, 6> room_materials;
    std::vector<ObstacleSpec> obstacles;
    RadioConfig radio;
    bool horizontal_edges = false; // diffraction on top/bottom box edges
};

// Planar rectangular reflector. `front` is the unit normal pointing into
// free space (into the room for walls, out of the box for obstacle faces).
struct Facet
{
    int id = 0;
    int axis = 0;          // normal axis
    double coordinate = 0; // plane position along axis
    Vec3 front = Vec3::Zero();
    Box extent;            // degenerate along `axis`
    int material = 0;
    int obstacle = -1;     // -1 for room facets
};

struct Edge
{
    int id = 0;
    Vec3 a = Vec3::Zero();
    Vec3 b = Vec3::Zero();
    int obstacle = 0;
};

struct Obstacle
{
    std::string name;
    Box box;
    int material = 0;
};

class Scene
{
  public:
    const Box &bounds() const { return bounds_; }
    const std::vector<Material> &materials() const { return materials_; }
    const std::vector<Obstacle> &obstacles() const { return obstacles_; }
    const std::vector<Facet> &facets() const { return facets_; }
    const std::vector<Edge> &edges() const { return edges_; }
    const RadioConfig &radio() const { return radio_; }

    // facet_compatible(a, b): some point of facet a lies strictly in front
    // of facet b, so a ray can travel from a to b.
    bool facet_compatible(int from, int to) const { return compat_[from * facets_.size() + to] != 0; }
    bool edge_facet_compatible(int edge, int facet) const { return edge_compat_[edge * facets_.size() + facet] != 0; }

    // True when p is inside the room and not inside (closed) any obstacle.
    bool is_free(const Vec3 &p) const;

    // Canonical digest over geometry, materials and radio grid.
    std::uint64_t digest() const { return digest_; }

    friend Scene build_scene(const SceneDescription &desc);

  private:
    Box bounds_;
    std::vector<Material> materials_;
    std::vector<Obstacle> obstacles_;
    std::vector<Facet> facets_;
    std::vector<Edge> edges_;
    std::vector<char> compat_;
    std::vector<char> edge_compat_;
    RadioConfig radio_;
    std::uint64_t digest_ = 0;
};

// Validates the description and derives facets, edges and compatibility
// tables. Throws OverlapError for obstacles leaving the room and
// ConfigError for anything else malformed.
Scene build_scene(const SceneDescription &desc);

// Uniform grid at the given height, row-major (y outer, x inner), starting
// at bounds.min + margin. Points inside obstacles are dropped. Default
// margin is resolution / 2.
std::vector<Vec3> place_ue_grid(const Scene &scene, double resolution, double height,
                                std::optional<double> margin = std::nullopt);

// True iff the segment a->b passes through the interior of any obstacle.
bool los_blocked(const Scene &scene, const Vec3 &a, const Vec3 &b);

// ---- Antennas -------------------------------------------------------------

enum class Polarization
{
    V,
    H
};

struct ArrayConfig
{
    std::vector<Polarization> polarizations{Polarization::V, Polarization::V, Polarization::H, Polarization::H};
    double co_pol_spacing = 0.5; // in wavelengths
    double xpd_db = 20.0;        // antenna cross-polar discrimination
    Vec3 orientation = Vec3::UnitX();

    std::size_t element_count() const { return polarizations.size(); }
    void validate() const;
};

struct ArrayElement
{
    Vec3 offset = Vec3::Zero();
    Eigen::Vector2d jones = Eigen::Vector2d::UnitX(); // (V, H) basis
    Polarization polarization = Polarization::V;
};

// Co-polarized elements sit at n * spacing * lambda along the orientation,
// n counting elements of the same polarization in config order; a V and an
// H element with the same rank share a position (cross-polarized pair).
std::vector<ArrayElement> array_elements(const ArrayConfig &config, double carrier);

// ---- Deployment and power -------------------------------------------------

struct Site
{
    int id = 0;
    Vec3 position = Vec3::Zero();
    ArrayConfig array;
};

struct Deployment
{
    std::vector<Site> aps;
    std::vector<Site> ues;
    std::vector<int> active_ap_ids;

    const Site &ap(int id) const;
    const Site &ue(int id) const;
};

// Throws ConfigError / OverlapError.
void validate_deployment(const Scene &scene, const Deployment &deployment);

enum class TxPowerKind
{
    ConstantPerAp,
    ConstantNetwork
};

struct TxPowerModel
{
    TxPowerKind kind = TxPowerKind::ConstantPerAp;
    double level_dbm = 23.0;

    // Total power radiated by one AP when active_aps are on.
    double ap_total_dbm(std::size_t active_aps) const;
    // Reference power per AP antenna.
    double per_antenna_dbm(std::size_t active_aps, std::size_t antennas) const;
};

struct NoiseModel
{
    double n0_dbm_per_rb = -118.0;
    double n0_mw() const;
};

} // namespace dmimo
