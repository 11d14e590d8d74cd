// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "common/error.hpp"
#include "scene/geometry.hpp"
#include "scene/scene.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace dmimo;

namespace
{

// Independent slab-method oracle: parametric overlap of the segment with the
// open box, accumulated per axis with long double.
bool oracle_hits(const Box &box, const Vec3 &a, const Vec3 &b)
{
    long double t0 = 0, t1 = 1;
    for (int k = 0; k < 3; ++k)
    {
        const long double d = (long double)b[k] - a[k];
        if (d == 0)
        {
            if (!(a[k] > box.min[k] && a[k] < box.max[k]))
                return false;
            continue;
        }
        long double lo = ((long double)box.min[k] - a[k]) / d;
        long double hi = ((long double)box.max[k] - a[k]) / d;
        if (lo > hi)
            std::swap(lo, hi);
        t0 = std::max(t0, lo);
        t1 = std::min(t1, hi);
    }
    return t1 > t0;
}

Scene rack_room()
{
    auto d = test::empty_room(20, 10, 5);
    d.obstacles.push_back({"rack", Box{Vec3(4, 2, 0), Vec3(8, 3, 4)}, "metal"});
    return build_scene(d);
}

} // namespace

TEST_CASE("build_scene: valid scenes and derived facets")
{
    const Scene empty = build_scene(test::empty_room(10, 10, 5));
    CHECK(empty.facets().size() == 6);
    CHECK(empty.edges().empty());
    for (const auto &f : empty.facets())
    {
        // Inward normal: the room centre lies in front of every wall.
        const Vec3 c = empty.bounds().center();
        CHECK((c[f.axis] - f.coordinate) * f.front[f.axis] > 0);
    }

    const Scene s = rack_room();
    CHECK(s.obstacles().size() == 1);
    // The box sits on the floor: 5 exposed faces, 4 vertical edges.
    CHECK(s.facets().size() == 6 + 5);
    CHECK(s.edges().size() == 4);
    CHECK(s.digest() != empty.digest());
    CHECK(s.digest() == rack_room().digest());

    // Large hall with racks of height 4 m.
    auto big = test::empty_room(97, 36, 6);
    for (int i = 0; i < 8; ++i)
        big.obstacles.push_back({"r" + std::to_string(i), Box{Vec3(5 + 11.0 * i, 8, 0), Vec3(12 + 11.0 * i, 9, 4)}, "metal"});
    CHECK_NOTHROW(build_scene(big));
}

TEST_CASE("build_scene: invalid input")
{
    auto d = test::empty_room(10, 10, 5);
    d.obstacles.push_back({"out", Box{Vec3(8, 2, 0), Vec3(12, 4, 3)}, "metal"});
    CHECK_THROWS_AS(build_scene(d), OverlapError);

    CHECK_THROWS_AS(build_scene(test::empty_room(0, 10, 5)), ConfigError);
    CHECK_THROWS_AS(build_scene(test::empty_room(10, -1, 5)), ConfigError);

    auto m = test::empty_room(10, 10, 5);
    m.obstacles.push_back({"x", Box{Vec3(1, 1, 0), Vec3(2, 2, 1)}, "unobtainium"});
    CHECK_THROWS_AS(build_scene(m), ConfigError);

    auto r = test::empty_room(10, 10, 5);
    r.radio.rb_count = 100; // 100 * 360 kHz > 20 MHz
    CHECK_THROWS_AS(build_scene(r), ConfigError);

    auto eps = test::empty_room(10, 10, 5);
    eps.materials.push_back({"odd", 0.5, 0.0, false});
    CHECK_THROWS_AS(build_scene(eps), ConfigError);
}

TEST_CASE("place_ue_grid: counts against the enumeration formula")
{
    const Scene s = build_scene(test::empty_room(10, 6, 3));
    const auto pts = place_ue_grid(s, 2.0, 1.5, 1.0);
    const auto per_axis = [](double len, double margin, double res) {
        return static_cast<std::size_t>(std::floor((len - 2 * margin) / res)) + 1;
    };
    CHECK(pts.size() == per_axis(10, 1, 2) * per_axis(6, 1, 2));
    CHECK(pts.size() == 15);
    // Row-major, y outer.
    CHECK(pts[0].isApprox(Vec3(1, 1, 1.5)));
    CHECK(pts[1].isApprox(Vec3(3, 1, 1.5)));
    CHECK(pts[5].isApprox(Vec3(1, 3, 1.5)));

    // Default margin is half the resolution.
    CHECK(place_ue_grid(s, 2.0, 1.5).front().isApprox(Vec3(1, 1, 1.5)));

    const auto single = place_ue_grid(s, 50.0, 1.5);
    REQUIRE(single.size() == 1);
    CHECK(single[0].isApprox(Vec3(5, 3, 1.5)));

    CHECK_THROWS_AS(place_ue_grid(s, 2.0, 3.5), ConfigError);
    CHECK_THROWS_AS(place_ue_grid(s, 0.0, 1.5), ConfigError);
}

TEST_CASE("place_ue_grid: obstacles removed by brute-force point-in-box check")
{
    auto d = test::empty_room(20, 10, 4);
    d.obstacles.push_back({"half", Box{Vec3(0.5, 0.5, 0), Vec3(10, 9.5, 3)}, "metal"});
    d.obstacles.push_back({"small", Box{Vec3(14, 2, 0), Vec3(16, 6, 2)}, "metal"});
    const Scene s = build_scene(d);
    const auto pts = place_ue_grid(s, 1.0, 1.0, 0.5);

    std::size_t expected = 0;
    for (int j = 0; j < 10; ++j)
        for (int i = 0; i < 20; ++i)
        {
            const Vec3 p(0.5 + i, 0.5 + j, 1.0);
            bool inside = false;
            for (const auto &o : d.obstacles)
                inside |= (p.array() >= o.box.min.array()).all() && (p.array() <= o.box.max.array()).all();
            expected += inside ? 0 : 1;
        }
    CHECK(pts.size() == expected);

    // Invariant under obstacle permutation.
    std::swap(d.obstacles[0], d.obstacles[1]);
    const auto permuted = place_ue_grid(build_scene(d), 1.0, 1.0, 0.5);
    REQUIRE(permuted.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK(permuted[i] == pts[i]);
    for (const auto &p : pts)
        CHECK(s.is_free(p));
}

TEST_CASE("los_blocked")
{
    const Scene empty = build_scene(test::empty_room(10, 10, 5));
    CHECK_FALSE(los_blocked(empty, Vec3(1, 1, 1), Vec3(9, 9, 4)));

    const Scene s = rack_room();
    CHECK(los_blocked(s, Vec3(6, 1, 2), Vec3(6, 5, 2)));
    CHECK_FALSE(los_blocked(s, Vec3(6, 1, 4.5), Vec3(6, 5, 4.5)));
    // Grazing a vertical edge at exact tangency.
    CHECK_FALSE(los_blocked(s, Vec3(1.5, 4.5, 2), Vec3(5.5, 0.5, 2)));
    CHECK(oracle_hits(s.obstacles()[0].box, Vec3(1.5, 4.5, 2), Vec3(5.5, 0.5, 2)) == false);
    // Running along a face is not inside.
    CHECK_FALSE(los_blocked(s, Vec3(3, 2, 1), Vec3(9, 2, 1)));
}

TEST_CASE("segment_hits_open_box agrees with the slab oracle and is symmetric")
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    const Box box{Vec3(3, 3, 1), Vec3(6, 5, 4)};
    int hits = 0;
    for (int i = 0; i < 20000; ++i)
    {
        Vec3 a(u(gen), u(gen), u(gen) / 2), b(u(gen), u(gen), u(gen) / 2);
        if (i % 4 == 0)
            b[2] = a[2]; // axis-parallel component
        const bool h = segment_hits_open_box(box, a, b);
        CHECK(h == oracle_hits(box, a, b));
        CHECK(h == segment_hits_open_box(box, b, a));
        hits += h;
    }
    CHECK(hits > 1000);
}

TEST_CASE("array_elements")
{
    ArrayConfig cfg;
    cfg.polarizations = {Polarization::V, Polarization::H, Polarization::V, Polarization::H};
    const double f = 3.7e9;
    const double lambda = 299792458.0 / f;
    const auto el = array_elements(cfg, f);
    REQUIRE(el.size() == 4);
    CHECK((el[2].offset - el[0].offset).norm() == doctest::Approx(lambda / 2).epsilon(1e-12));
    CHECK((el[3].offset - el[1].offset).norm() == doctest::Approx(lambda / 2).epsilon(1e-12));
    CHECK((el[2].offset - el[0].offset).norm() == doctest::Approx(0.0405).epsilon(0.001));
    CHECK(el[0].jones == Eigen::Vector2d(1, 0));
    CHECK(el[1].jones == Eigen::Vector2d(0, 1));

    ArrayConfig one;
    one.polarizations = {Polarization::V};
    const auto e1 = array_elements(one, f);
    REQUIRE(e1.size() == 1);
    CHECK(e1[0].offset.norm() == 0.0);

    ArrayConfig two;
    two.polarizations = {Polarization::V, Polarization::V};
    two.co_pol_spacing = 1.0;
    CHECK((array_elements(two, 1e9)[1].offset).norm() == doctest::Approx(0.299792458).epsilon(1e-12));

    ArrayConfig bad;
    bad.polarizations.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.polarizations = {Polarization::V};
    bad.co_pol_spacing = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("validate_deployment")
{
    const Scene s = rack_room();
    Deployment d;
    d.aps = {Site{1, Vec3(1, 1, 4), {}}, Site{2, Vec3(19, 9, 4), {}}};
    d.ues = {Site{0, Vec3(10, 5, 1.5), {}}};
    d.active_ap_ids = {1, 2};
    CHECK_NOTHROW(validate_deployment(s, d));

    auto dup = d;
    dup.aps[1].id = 1;
    CHECK_THROWS_AS(validate_deployment(s, dup), ConfigError);
    auto unknown = d;
    unknown.active_ap_ids = {3};
    CHECK_THROWS_AS(validate_deployment(s, unknown), ConfigError);
    auto outside = d;
    outside.ues[0].position = Vec3(25, 5, 1);
    CHECK_THROWS_AS(validate_deployment(s, outside), ConfigError);
    auto inside = d;
    inside.ues[0].position = Vec3(5, 2.5, 1);
    CHECK_THROWS_AS(validate_deployment(s, inside), OverlapError);
}

TEST_CASE("tx power models")
{
    const TxPowerModel per_ap{TxPowerKind::ConstantPerAp, 23.0};
    const TxPowerModel network{TxPowerKind::ConstantNetwork, 27.8};
    CHECK(per_ap.ap_total_dbm(15) == 23.0);
    CHECK(network.ap_total_dbm(1) == doctest::Approx(27.8));
    CHECK(network.ap_total_dbm(3) == doctest::Approx(27.8 - 10 * std::log10(3.0)));
    // 15 APs sharing 27.8 dBm get about 16 dBm each.
    CHECK(network.ap_total_dbm(15) == doctest::Approx(16.039).epsilon(1e-3));
    CHECK(per_ap.per_antenna_dbm(1, 4) == doctest::Approx(23.0 - 10 * std::log10(4.0)));
}
