// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "common/error.hpp"
#include "metrics/metrics.hpp"
#include "support.hpp"

#include <cmath>

using namespace dmimo;

namespace
{

LinkChannel two_block_link(double g1, double g2)
{
    LinkChannel l;
    l.ap_ids = {4, 9};
    for (int k = 0; k < 3; ++k)
    {
        ComplexMatrix h = ComplexMatrix::Zero(8, 4);
        h.topRows(4).setConstant(std::complex<double>(g1, 0));
        h.bottomRows(4).setConstant(std::complex<double>(0, g2));
        l.per_rb.push_back(h);
        l.rb_center_frequencies.push_back(3.7e9 + k * 360e3);
    }
    return l;
}

} // namespace

TEST_CASE("RSRP per AP block")
{
    const auto r = rsrp_dbm(two_block_link(1e-3, 1e-4), 10.0);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(10.0 - 60.0));
    CHECK(r[1] == doctest::Approx(10.0 - 80.0));
    const auto z = rsrp_dbm(two_block_link(1e-3, 0.0), 0.0);
    CHECK(std::isinf(z[1]));
    CHECK(z[1] < 0);
}

TEST_CASE("RSRP under the Tx power models")
{
    auto link = two_block_link(1e-3, 0.0);
    link.ap_ids = {4};
    for (auto &h : link.per_rb)
        h = h.topRows(4).eval();
    TxPowerModel per_ap{TxPowerKind::ConstantPerAp, 23.0};
    TxPowerModel network{TxPowerKind::ConstantNetwork, 27.8};
    // 23 dBm over 4 antennas, gain -60 dB.
    CHECK(rsrp_dbm(link, per_ap, 7) == doctest::Approx(23 - 10 * std::log10(4.0) - 60));
    CHECK(rsrp_dbm(link, network, 3) == doctest::Approx(27.8 - 10 * std::log10(3.0) - 10 * std::log10(4.0) - 60));
}

TEST_CASE("detection statistics")
{
    const std::vector<ApValue> v{{3, -90}, {1, -80}, {2, -95}, {5, -120}};
    const auto s = detection_stats(v, -100);
    CHECK(s.best_server == 1);
    CHECK(s.detected == 3);
    CHECK(s.relative_2nd_db == doctest::Approx(-10));
    CHECK(s.relative_3rd_db == doctest::Approx(-15));

    const std::vector<ApValue> tie{{7, -80}, {2, -80}};
    const auto t = detection_stats(tie, -100);
    CHECK(t.best_server == 2);
    CHECK(t.relative_2nd_db == 0.0);
    CHECK(std::isinf(t.relative_3rd_db));

    const double ninf = -std::numeric_limits<double>::infinity();
    const std::vector<ApValue> dead{{1, -70}, {2, ninf}};
    CHECK(detection_stats(dead, -100).detected == 1);
    CHECK(std::isinf(detection_stats(dead, -100).relative_2nd_db));
    CHECK(detection_stats(std::vector<ApValue>{}, -100).best_server == -1);
}

TEST_CASE("AP selection")
{
    const std::vector<ApValue> v{{3, -90}, {1, -80}, {2, -90}, {5, -120}};
    CHECK(select_aps(v, 0).empty());
    CHECK(select_aps(v, 1) == std::vector<int>{1});
    CHECK(select_aps(v, 3) == std::vector<int>{1, 2, 3});
    CHECK(select_aps(v, 4) == std::vector<int>{1, 2, 3, 5});
    CHECK_THROWS_AS(select_aps(v, 5), ConfigError);
}

TEST_CASE("LoS count")
{
    auto d = test::empty_room(20, 10, 5);
    d.obstacles.push_back({"wall", Box{Vec3(9, 0, 0), Vec3(11, 8, 5)}, "metal"});
    const Scene scene = build_scene(d);
    Deployment dep;
    dep.aps = {{1, Vec3(2, 2, 2), {}}, {2, Vec3(18, 2, 2), {}}, {3, Vec3(10, 9, 2), {}}};
    dep.active_ap_ids = {1, 2, 3};
    const Vec3 ue(4, 4, 1.5);
    CHECK(los_count(scene, dep, ue) == 2);
    dep.active_ap_ids = {2};
    CHECK(los_count(scene, dep, ue) == 0);
}

TEST_CASE("distribution table")
{
    const std::vector<double> x{5, 1, 3, 3, 9};
    const auto t = aggregate(x);
    CHECK(t.sorted() == std::vector<double>{1, 3, 3, 5, 9});
    CHECK(t.cdf(0) == 0.0);
    CHECK(t.cdf(3) == doctest::Approx(0.6));
    CHECK(t.ccdf(3) == doctest::Approx(0.4));
    CHECK(t.cdf(9) == 1.0);
    CHECK(t.percentile(0) == 1);
    CHECK(t.percentile(0.5) == 3);
    CHECK(t.percentile(0.74) == 3); // floor(0.74 * 4) = 2
    CHECK(t.percentile(0.75) == 5);
    CHECK(t.percentile(1) == 9);
    CHECK(t.median() == 3);
    CHECK(t.mean() == doctest::Approx(4.2));

    const std::vector<double> even{4, 1, 2, 3};
    CHECK(aggregate(even).median() == 2); // lower median
    CHECK_THROWS_AS(aggregate(std::vector<double>{}), EmptyInput);
}
