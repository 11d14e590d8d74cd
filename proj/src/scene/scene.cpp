// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#include "scene/scene.hpp"

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/units.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dmimo
{

namespace
{

constexpr double front_tol = 1e-9;

Material default_concrete() { return {"concrete", 5.31, 0.0326, false}; }
Material default_metal() { return {"metal", 1.0, 0.0, true}; }

int find_material(const std::vector<Material> &materials, const std::string &name, const std::string &who)
{
    for (std::size_t i = 0; i < materials.size(); ++i)
        if (materials[i].name == name)
            return static_cast<int>(i);
    throw ConfigError("unknown material '" + name + "' referenced by " + who);
}

void validate_radio(const RadioConfig &r)
{
    if (!(r.carrier_frequency > 0.0) || !std::isfinite(r.carrier_frequency))
        throw ConfigError("carrier frequency must be positive");
    if (!(r.bandwidth > 0.0))
        throw ConfigError("bandwidth must be positive");
    if (r.rb_count < 1 || r.subcarriers_per_rb < 1)
        throw ConfigError("rb_count and subcarriers_per_rb must be >= 1");
    if (!(r.subcarrier_spacing > 0.0))
        throw ConfigError("subcarrier spacing must be positive");
    const double occupied = r.rb_count * r.rb_width();
    if (occupied > r.bandwidth * (1.0 + 1e-12))
        throw ConfigError("RB grid spans " + std::to_string(occupied) + " Hz, more than the bandwidth");
}

// Signed distance of p in front of the facet plane.
double front_distance(const Facet &f, const Vec3 &p)
{
    return (p[f.axis] - f.coordinate) * f.front[f.axis];
}

std::vector<Vec3> facet_corners(const Facet &f)
{
    std::vector<Vec3> corners;
    const int u = (f.axis + 1) % 3;
    const int v = (f.axis + 2) % 3;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
        {
            Vec3 c = f.extent.min;
            c[u] = i ? f.extent.max[u] : f.extent.min[u];
            c[v] = j ? f.extent.max[v] : f.extent.min[v];
            corners.push_back(c);
        }
    return corners;
}

bool on_room_boundary(const Box &room, int axis, double coordinate)
{
    return coordinate == room.min[axis] || coordinate == room.max[axis];
}

} // namespace

double RadioConfig::wavelength() const { return dmimo::wavelength(carrier_frequency); }

std::vector<double> RadioConfig::rb_center_frequencies() const
{
    std::vector<double> f(static_cast<std::size_t>(rb_count));
    const double mid = 0.5 * (rb_count - 1);
    for (int k = 0; k < rb_count; ++k)
        f[k] = carrier_frequency + (k - mid) * rb_width();
    return f;
}

bool Scene::is_free(const Vec3 &p) const
{
    if (!inside_open(bounds_, p))
        return false;
    for (const auto &o : obstacles_)
        if (inside_closed(o.box, p))
            return false;
    return true;
}

Scene build_scene(const SceneDescription &desc)
{
    Scene s;
    const Vec3 size = desc.bounds.size();
    if (!(size.minCoeff() > 0.0) || !size.allFinite())
        throw ConfigError("scene bounds must have positive extent on every axis");
    validate_radio(desc.radio);
    s.bounds_ = desc.bounds;
    s.radio_ = desc.radio;

    std::set<std::string> names;
    for (const auto &m : desc.materials)
    {
        if (!names.insert(m.name).second)
            throw ConfigError("duplicate material '" + m.name + "'");
        if (!m.is_perfect_conductor && !(m.relative_permittivity >= 1.0))
            throw ConfigError("material '" + m.name + "' needs relative permittivity >= 1");
        if (!(m.conductivity >= 0.0))
            throw ConfigError("material '" + m.name + "' needs non-negative conductivity");
        s.materials_.push_back(m);
    }
    if (!names.count("concrete"))
        s.materials_.push_back(default_concrete());
    if (!names.count("metal"))
        s.materials_.push_back(default_metal());

    // Room facets, normals pointing inwards.
    static const char *room_names[6] = {"x_min wall", "x_max wall", "y_min wall", "y_max wall", "floor", "ceiling"};
    for (int i = 0; i < 6; ++i)
    {
        Facet f;
        f.id = i;
        f.axis = i / 2;
        const bool is_max = i % 2 == 1;
        f.coordinate = is_max ? desc.bounds.max[f.axis] : desc.bounds.min[f.axis];
        f.front = Vec3::Zero();
        f.front[f.axis] = is_max ? -1.0 : 1.0;
        f.extent = desc.bounds;
        f.extent.min[f.axis] = f.extent.max[f.axis] = f.coordinate;
        const std::string &mat = desc.room_materials[i].empty() ? std::string("concrete") : desc.room_materials[i];
        f.material = find_material(s.materials_, mat, room_names[i]);
        s.facets_.push_back(f);
    }

    for (const auto &spec : desc.obstacles)
    {
        const Vec3 osize = spec.box.size();
        if (!(osize.minCoeff() > 0.0) || !osize.allFinite())
            throw ConfigError("obstacle '" + spec.name + "' must have positive extent");
        if (!box_within(spec.box, desc.bounds))
            throw OverlapError("obstacle '" + spec.name + "' extends past the scene bounds");
        Obstacle o{spec.name, spec.box,
                   find_material(s.materials_, spec.material.empty() ? std::string("metal") : spec.material,
                                 "obstacle '" + spec.name + "'")};
        const int index = static_cast<int>(s.obstacles_.size());
        s.obstacles_.push_back(o);

        for (int i = 0; i < 6; ++i)
        {
            Facet f;
            f.axis = i / 2;
            const bool is_max = i % 2 == 1;
            f.coordinate = is_max ? o.box.max[f.axis] : o.box.min[f.axis];
            // A face lying on the room boundary faces out of the room.
            if (on_room_boundary(desc.bounds, f.axis, f.coordinate))
                continue;
            f.id = static_cast<int>(s.facets_.size());
            f.front = Vec3::Zero();
            f.front[f.axis] = is_max ? 1.0 : -1.0;
            f.extent = o.box;
            f.extent.min[f.axis] = f.extent.max[f.axis] = f.coordinate;
            f.material = o.material;
            f.obstacle = index;
            s.facets_.push_back(f);
        }

        auto add_edge = [&](const Vec3 &a, const Vec3 &b) {
            // Skip edges lying in a room wall plane: no free-space wedge there.
            for (int axis = 0; axis < 3; ++axis)
                if (a[axis] == b[axis] && on_room_boundary(desc.bounds, axis, a[axis]))
                    return;
            s.edges_.push_back({static_cast<int>(s.edges_.size()), a, b, index});
        };
        const Vec3 &lo = o.box.min;
        const Vec3 &hi = o.box.max;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
            {
                const double x = i ? hi.x() : lo.x();
                const double y = j ? hi.y() : lo.y();
                add_edge({x, y, lo.z()}, {x, y, hi.z()});
            }
        if (desc.horizontal_edges)
        {
            for (double z : {lo.z(), hi.z()})
            {
                add_edge({lo.x(), lo.y(), z}, {hi.x(), lo.y(), z});
                add_edge({lo.x(), hi.y(), z}, {hi.x(), hi.y(), z});
                add_edge({lo.x(), lo.y(), z}, {lo.x(), hi.y(), z});
                add_edge({hi.x(), lo.y(), z}, {hi.x(), hi.y(), z});
            }
        }
    }

    const std::size_t nf = s.facets_.size();
    s.compat_.assign(nf * nf, 0);
    for (std::size_t a = 0; a < nf; ++a)
    {
        const auto corners = facet_corners(s.facets_[a]);
        for (std::size_t b = 0; b < nf; ++b)
        {
            if (a == b)
                continue;
            for (const auto &c : corners)
                if (front_distance(s.facets_[b], c) > front_tol)
                {
                    s.compat_[a * nf + b] = 1;
                    break;
                }
        }
    }
    s.edge_compat_.assign(s.edges_.size() * nf, 0);
    for (const auto &e : s.edges_)
        for (std::size_t b = 0; b < nf; ++b)
            if (front_distance(s.facets_[b], e.a) > front_tol || front_distance(s.facets_[b], e.b) > front_tol)
                s.edge_compat_[e.id * nf + b] = 1;

    Fnv1a h;
    h.text("dmimo-scene-v1");
    for (int i = 0; i < 3; ++i)
        h.f64(desc.bounds.min[i]).f64(desc.bounds.max[i]);
    for (const auto &m : s.materials_)
        h.text(m.name).f64(m.relative_permittivity).f64(m.conductivity).u64(m.is_perfect_conductor);
    for (int i = 0; i < 6; ++i)
        h.i64(s.facets_[i].material);
    for (const auto &o : s.obstacles_)
    {
        h.text(o.name).i64(o.material);
        for (int i = 0; i < 3; ++i)
            h.f64(o.box.min[i]).f64(o.box.max[i]);
    }
    h.f64(desc.radio.carrier_frequency).f64(desc.radio.bandwidth).i64(desc.radio.rb_count);
    h.i64(desc.radio.subcarriers_per_rb).f64(desc.radio.subcarrier_spacing).u64(desc.horizontal_edges);
    s.digest_ = h.value();
    return s;
}

std::vector<Vec3> place_ue_grid(const Scene &scene, double resolution, double height, std::optional<double> margin)
{
    if (!(resolution > 0.0))
        throw ConfigError("grid resolution must be positive");
    const Box &b = scene.bounds();
    if (!(height > b.min.z() && height < b.max.z()))
        throw ConfigError("grid height " + std::to_string(height) + " m is outside the scene");
    const double m = margin.value_or(resolution / 2.0);
    if (!(m >= 0.0))
        throw ConfigError("grid margin must be non-negative");

    auto axis_points = [&](int axis) {
        std::vector<double> pts;
        const double span = b.max[axis] - b.min[axis] - 2.0 * m;
        if (span < 0.0)
        {
            pts.push_back(b.center()[axis]);
            return pts;
        }
        const auto n = static_cast<long>(std::floor(span / resolution + 1e-9)) + 1;
        for (long i = 0; i < n; ++i)
            pts.push_back(b.min[axis] + m + i * resolution);
        return pts;
    };
    const auto xs = axis_points(0);
    const auto ys = axis_points(1);

    std::vector<Vec3> out;
    for (double y : ys)
        for (double x : xs)
        {
            const Vec3 p(x, y, height);
            if (scene.is_free(p))
                out.push_back(p);
        }
    return out;
}

bool los_blocked(const Scene &scene, const Vec3 &a, const Vec3 &b)
{
    for (const auto &o : scene.obstacles())
        if (segment_hits_open_box(o.box, a, b))
            return true;
    return false;
}

void ArrayConfig::validate() const
{
    if (polarizations.empty())
        throw ConfigError("antenna array needs at least one element");
    if (!(co_pol_spacing > 0.0))
        throw ConfigError("co-polarized spacing must be positive");
    if (!(orientation.norm() > 0.0) || !orientation.allFinite())
        throw ConfigError("array orientation must be a non-zero vector");
    if (std::isnan(xpd_db))
        throw ConfigError("array XPD must be a number");
}

std::vector<ArrayElement> array_elements(const ArrayConfig &config, double carrier)
{
    const double lambda = wavelength(carrier);
    const Vec3 axis = config.orientation.normalized();
    std::vector<ArrayElement> out;
    int v_rank = 0;
    int h_rank = 0;
    for (auto pol : config.polarizations)
    {
        const int rank = pol == Polarization::V ? v_rank++ : h_rank++;
        ArrayElement e;
        e.polarization = pol;
        e.offset = axis * (rank * config.co_pol_spacing * lambda);
        e.jones = pol == Polarization::V ? Eigen::Vector2d(1.0, 0.0) : Eigen::Vector2d(0.0, 1.0);
        out.push_back(e);
    }
    return out;
}

const Site &Deployment::ap(int id) const
{
    for (const auto &s : aps)
        if (s.id == id)
            return s;
    throw ConfigError("unknown AP id " + std::to_string(id));
}

const Site &Deployment::ue(int id) const
{
    for (const auto &s : ues)
        if (s.id == id)
            return s;
    throw ConfigError("unknown UE id " + std::to_string(id));
}

void validate_deployment(const Scene &scene, const Deployment &deployment)
{
    auto check_sites = [&](const std::vector<Site> &sites, const char *what) {
        std::set<int> ids;
        for (const auto &s : sites)
        {
            const std::string tag = std::string(what) + " " + std::to_string(s.id);
            if (!ids.insert(s.id).second)
                throw ConfigError("duplicate " + tag);
            s.array.validate();
            if (!inside_open(scene.bounds(), s.position))
                throw ConfigError(tag + " is outside the scene bounds");
            for (const auto &o : scene.obstacles())
                if (inside_closed(o.box, s.position))
                    throw OverlapError(tag + " lies inside obstacle '" + o.name + "'");
        }
        return ids;
    };
    const auto ap_ids = check_sites(deployment.aps, "AP");
    check_sites(deployment.ues, "UE");
    std::set<int> active;
    for (int id : deployment.active_ap_ids)
    {
        if (!ap_ids.count(id))
            throw ConfigError("active AP id " + std::to_string(id) + " is not deployed");
        if (!active.insert(id).second)
            throw ConfigError("active AP id " + std::to_string(id) + " listed twice");
    }
}

double TxPowerModel::ap_total_dbm(std::size_t active_aps) const
{
    if (kind == TxPowerKind::ConstantPerAp || active_aps == 0)
        return level_dbm;
    return level_dbm - power_to_db(static_cast<double>(active_aps));
}

double TxPowerModel::per_antenna_dbm(std::size_t active_aps, std::size_t antennas) const
{
    return ap_total_dbm(active_aps) - power_to_db(static_cast<double>(antennas));
}

double NoiseModel::n0_mw() const { return dbm_to_mw(n0_dbm_per_rb); }

} // namespace dmimo
