// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#include "tracer/tracer.hpp"

#include "common/units.hpp"
#include "tracer/fresnel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace dmimo
{

namespace
{

constexpr double geom_tol = 1e-9;

struct Element
{
    bool diffraction = false;
    int id = 0;
};

double front_distance(const Facet &f, const Vec3 &p)
{
    return (p[f.axis] - f.coordinate) * f.front[f.axis];
}

// Point where the segment from -> to crosses the facet plane, if it lies on
// the facet rectangle strictly between the endpoints.
std::optional<Vec3> cross_facet(const Facet &f, const Vec3 &from, const Vec3 &to)
{
    const double denom = to[f.axis] - from[f.axis];
    if (std::abs(denom) < 1e-15)
        return std::nullopt;
    const double t = (f.coordinate - from[f.axis]) / denom;
    if (!(t > 1e-12 && t < 1.0 - 1e-12))
        return std::nullopt;
    Vec3 p = from + t * (to - from);
    p[f.axis] = f.coordinate;
    if (!inside_closed(f.extent, p, geom_tol))
        return std::nullopt;
    return p;
}

// Stationary point of |s - p| + |p - t| on the edge (Keller's law of
// diffraction), if it falls strictly inside the edge.
std::optional<Vec3> edge_point(const Edge &e, const Vec3 &s, const Vec3 &t)
{
    const Vec3 axis = e.b - e.a;
    const double len = axis.norm();
    const Vec3 u = axis / len;
    const double ss = (s - e.a).dot(u);
    const double ts = (t - e.a).dot(u);
    const double sr = (s - e.a - ss * u).norm();
    const double tr = (t - e.a - ts * u).norm();
    if (sr + tr < geom_tol)
        return std::nullopt;
    const double along = ss + (ts - ss) * sr / (sr + tr);
    if (!(along > geom_tol && along < len - geom_tol))
        return std::nullopt;
    return Vec3(e.a + along * u);
}

class SequenceTracer
{
  public:
    SequenceTracer(const Scene &scene, const Vec3 &ap, const Vec3 &ue, const TraceBudget &budget)
        : scene_(scene), ap_(ap), ue_(ue), budget_(budget), lambda_(scene.radio().wavelength())
    {
    }

    std::vector<RayPath> run()
    {
        if ((ue_ - ap_).norm() > geom_tol && !los_blocked(scene_, ap_, ue_))
        {
            RayPath los;
            los.is_los = true;
            los.length = (ue_ - ap_).norm();
            los.delay = los.length / speed_of_light;
            los.departure = los.arrival = (ue_ - ap_) / los.length;
            if (accept_loss(los))
                paths_.push_back(los);
        }
        const int max_depth = budget_.max_reflections + budget_.max_diffractions;
        for (int depth = 1; depth <= max_depth; ++depth)
        {
            seq_.clear();
            extend(depth, 0, 0);
        }
        deduplicate();
        return std::move(paths_);
    }

  private:
    const Scene &scene_;
    Vec3 ap_;
    Vec3 ue_;
    TraceBudget budget_;
    double lambda_;
    std::vector<Element> seq_;
    std::vector<RayPath> paths_;

    bool may_follow(const Element &next) const
    {
        const auto &facets = scene_.facets();
        if (seq_.empty())
            return next.diffraction || front_distance(facets[next.id], ap_) > geom_tol;
        const Element &prev = seq_.back();
        if (prev.diffraction && next.diffraction)
            return false;
        if (prev.diffraction)
            return scene_.edge_facet_compatible(prev.id, next.id);
        if (next.diffraction)
            return scene_.edge_facet_compatible(next.id, prev.id);
        return prev.id != next.id && scene_.facet_compatible(prev.id, next.id);
    }

    void extend(int depth, int reflections, int diffractions)
    {
        if (static_cast<int>(seq_.size()) == depth)
        {
            const Element &last = seq_.back();
            if (!last.diffraction && !(front_distance(scene_.facets()[last.id], ue_) > geom_tol))
                return;
            solve();
            return;
        }
        if (reflections < budget_.max_reflections)
        {
            for (const auto &f : scene_.facets())
            {
                const Element e{false, f.id};
                if (!may_follow(e))
                    continue;
                seq_.push_back(e);
                extend(depth, reflections + 1, diffractions);
                seq_.pop_back();
            }
        }
        if (diffractions < budget_.max_diffractions)
        {
            for (const auto &edge : scene_.edges())
            {
                const Element e{true, edge.id};
                if (!may_follow(e))
                    continue;
                seq_.push_back(e);
                extend(depth, reflections, diffractions + 1);
                seq_.pop_back();
            }
        }
    }

    void solve()
    {
        const auto &facets = scene_.facets();
        const int n = static_cast<int>(seq_.size());
        int d = -1;
        for (int i = 0; i < n; ++i)
            if (seq_[i].diffraction)
                d = i;

        std::vector<Vec3> points(n);
        const int pre_end = d < 0 ? n : d;

        // Images of the AP through the facets before the diffraction.
        std::vector<Vec3> src_images(pre_end + 1);
        src_images[0] = ap_;
        for (int i = 0; i < pre_end; ++i)
            src_images[i + 1] = image_reflect(facets[seq_[i].id], src_images[i]);

        Vec3 target = ue_;
        if (d >= 0)
        {
            // Images of the UE through the facets after the diffraction, last first.
            const int post = n - d - 1;
            std::vector<Vec3> dst_images(post + 1);
            dst_images[0] = ue_;
            for (int j = 0; j < post; ++j)
                dst_images[j + 1] = image_reflect(facets[seq_[n - 1 - j].id], dst_images[j]);

            const auto p = edge_point(scene_.edges()[seq_[d].id], src_images[pre_end], dst_images[post]);
            if (!p)
                return;
            points[d] = *p;
            Vec3 from = *p;
            for (int j = 0; j < post; ++j)
            {
                const int idx = d + 1 + j;
                const auto q = cross_facet(facets[seq_[idx].id], from, dst_images[post - 1 - j]);
                if (!q)
                    return;
                points[idx] = *q;
                from = *q;
            }
            target = *p;
        }
        for (int i = pre_end - 1; i >= 0; --i)
        {
            const auto q = cross_facet(facets[seq_[i].id], src_images[i + 1], target);
            if (!q)
                return;
            points[i] = *q;
            target = *q;
        }
        build_path(points);
    }

    void build_path(const std::vector<Vec3> &points)
    {
        const auto &facets = scene_.facets();
        const int n = static_cast<int>(points.size());
        auto real = [&](int i) -> const Vec3 & { return i < 0 ? ap_ : (i >= n ? ue_ : points[i]); };

        RayPath path;
        path.interactions.reserve(n);
        double length = 0.0;
        for (int i = -1; i < n; ++i)
        {
            const double leg = (real(i + 1) - real(i)).norm();
            if (leg < geom_tol)
                return;
            length += leg;
        }
        for (int i = -1; i < n; ++i)
            if (los_blocked(scene_, real(i), real(i + 1)))
                return;

        for (int i = 0; i < n; ++i)
        {
            const Vec3 &prev = real(i - 1);
            const Vec3 &next = real(i + 1);
            const Vec3 d_in = (points[i] - prev).normalized();
            Interaction in;
            in.point = points[i];
            in.element = seq_[i].id;
            if (!seq_[i].diffraction)
            {
                const Facet &f = facets[seq_[i].id];
                if (!(front_distance(f, prev) > geom_tol && front_distance(f, next) > geom_tol))
                    return;
                in.kind = InteractionKind::Reflection;
                const double cos_i = std::min(1.0, std::abs(d_in.dot(f.front)));
                in.incidence = std::acos(cos_i);
                const auto g = fresnel_coefficients(scene_.materials()[f.material], in.incidence,
                                                    scene_.radio().carrier_frequency);
                // Horizontal facets: V lies in the plane of incidence.
                if (f.axis == 2)
                {
                    in.coeff_v = g.parallel;
                    in.coeff_h = g.perpendicular;
                }
                else
                {
                    in.coeff_v = g.perpendicular;
                    in.coeff_h = g.parallel;
                }
            }
            else
            {
                // Only shadowed edges contribute; a clear bypass is already
                // carried by the undiffracted path.
                if (!los_blocked(scene_, prev, next))
                    return;
                const Edge &e = scene_.edges()[seq_[i].id];
                const double excess = (points[i] - prev).norm() + (next - points[i]).norm() - (next - prev).norm();
                in.kind = InteractionKind::Diffraction;
                in.nu = knife_edge_nu(excess, lambda_, true);
                in.incidence = std::acos(std::min(1.0, std::abs(d_in.dot((e.b - e.a).normalized()))));
                in.coeff_v = in.coeff_h = knife_edge_coefficient(in.nu);
            }
            path.interactions.push_back(in);
        }

        path.length = length;
        path.delay = length / speed_of_light;
        path.departure = (real(0) - ap_).normalized();
        path.arrival = (ue_ - real(n - 1)).normalized();
        path.pol_gain = Mat2c::Identity();
        for (const auto &in : path.interactions)
            path.pol_gain = Eigen::DiagonalMatrix<std::complex<double>, 2>(in.coeff_v, in.coeff_h) * path.pol_gain;
        if (accept_loss(path))
            paths_.push_back(std::move(path));
    }

    bool accept_loss(const RayPath &path) const
    {
        const double fs = amplitude_to_db(4.0 * std::numbers::pi * path.length / lambda_);
        const double total = fs + path.interaction_loss_db();
        return std::isfinite(total) && total <= budget_.max_path_loss_db;
    }

    // Identical interaction points (e.g. a reflection on an edge shared by two
    // coplanar facets) keep only the first occurrence.
    void deduplicate()
    {
        std::vector<RayPath> kept;
        kept.reserve(paths_.size());
        for (auto &p : paths_)
        {
            bool dup = false;
            for (const auto &k : kept)
            {
                if (k.interactions.size() != p.interactions.size() || std::abs(k.length - p.length) > geom_tol)
                    continue;
                bool same = true;
                for (std::size_t i = 0; i < p.interactions.size() && same; ++i)
                    same = k.interactions[i].kind == p.interactions[i].kind &&
                           (k.interactions[i].point - p.interactions[i].point).norm() < geom_tol;
                if (same)
                {
                    dup = true;
                    break;
                }
            }
            if (!dup)
                kept.push_back(std::move(p));
        }
        paths_ = std::move(kept);
    }
};

} // namespace

int RayPath::reflection_count() const
{
    return static_cast<int>(std::count_if(interactions.begin(), interactions.end(),
                                          [](const Interaction &i) { return i.kind == InteractionKind::Reflection; }));
}

int RayPath::diffraction_count() const
{
    return static_cast<int>(interactions.size()) - reflection_count();
}

double RayPath::interaction_loss_db() const
{
    double loss = 0.0;
    for (const auto &in : interactions)
        loss -= amplitude_to_db(std::max(std::abs(in.coeff_v), std::abs(in.coeff_h)));
    return loss;
}

std::string RayPath::kind_string() const
{
    if (interactions.empty())
        return "LOS";
    std::string s;
    for (const auto &in : interactions)
        s += in.kind == InteractionKind::Reflection ? 'R' : 'D';
    return s;
}

Vec3 image_reflect(const Facet &facet, const Vec3 &point)
{
    Vec3 out = point;
    out[facet.axis] = 2.0 * facet.coordinate - point[facet.axis];
    return out;
}

std::vector<RayPath> trace_geometry(const Scene &scene, const Vec3 &ap, const Vec3 &ue, const TraceBudget &budget)
{
    TraceBudget b = budget;
    b.max_reflections = std::clamp(b.max_reflections, 0, 2);
    b.max_diffractions = std::clamp(b.max_diffractions, 0, 1);
    return SequenceTracer(scene, ap, ue, b).run();
}

std::vector<RayPath> trace_link(const Scene &scene, const Vec3 &ap, const Vec3 &ue, const TraceBudget &budget,
                                const XprCalibration &cal, const LinkStream &stream)
{
    auto paths = trace_geometry(scene, ap, ue, budget);
    const bool los_link = !paths.empty() && paths.front().is_los;
    for (std::size_t i = 0; i < paths.size(); ++i)
    {
        const auto draws = draw_interactions(paths[i], stream, static_cast<int>(i));
        paths[i].pol_gain = path_polarization(paths[i], cal, los_link, draws);
    }
    return paths;
}

} // namespace dmimo
