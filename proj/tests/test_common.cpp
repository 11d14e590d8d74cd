// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/rng.hpp"
#include "common/units.hpp"
#include "harness/parallel.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

using namespace dmimo;

TEST_CASE("unit conversions")
{
    CHECK(dbm_to_mw(0.0) == doctest::Approx(1.0));
    CHECK(dbm_to_mw(30.0) == doctest::Approx(1000.0));
    CHECK(mw_to_dbm(dbm_to_mw(17.0)) == doctest::Approx(17.0).epsilon(1e-14));
    CHECK(db_to_power(3.0) == doctest::Approx(1.9952623149688795));
    CHECK(db_to_amplitude(20.0) == doctest::Approx(10.0));
    CHECK(amplitude_to_db(0.5) == doctest::Approx(-6.020599913279624));
    CHECK(wavelength(3.7e9) == doctest::Approx(0.0810249886).epsilon(1e-9));
    CHECK(floor_dbm(-std::numeric_limits<double>::infinity()) == power_floor_dbm);
    CHECK(floor_dbm(-50.0) == -50.0);
}

TEST_CASE("keyed streams are reproducible and independent")
{
    auto a = StreamRng::keyed({1, 2, 3});
    auto b = StreamRng::keyed({1, 2, 3});
    auto c = StreamRng::keyed({1, 3, 2});
    bool differs = false;
    for (int i = 0; i < 16; ++i)
    {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        differs |= x != c.next_u64();
    }
    CHECK(differs);
}

TEST_CASE("normal and complex normal moments")
{
    auto r = StreamRng::keyed({42});
    const int n = 200000;
    double s = 0, s2 = 0, c2 = 0;
    std::complex<double> cs = 0;
    for (int i = 0; i < n; ++i)
    {
        const double x = r.normal();
        s += x;
        s2 += x * x;
        const auto z = r.complex_normal();
        cs += z;
        c2 += std::norm(z);
    }
    // 5 standard errors.
    CHECK(std::abs(s / n) < 5.0 / std::sqrt(n));
    CHECK(std::abs(s2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(cs / double(n)) < 5.0 / std::sqrt(n));
    CHECK(std::abs(c2 / n - 1.0) < 5.0 / std::sqrt(n));

    double u_min = 1, u_max = 0;
    for (int i = 0; i < 10000; ++i)
    {
        const double u = r.uniform();
        u_min = std::min(u_min, u);
        u_max = std::max(u_max, u);
    }
    CHECK(u_min >= 0.0);
    CHECK(u_max < 1.0);
}

TEST_CASE("fnv1a reference vectors")
{
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
    Fnv1a h1, h2;
    h1.f64(0.0);
    h2.f64(-0.0);
    CHECK(h1.value() != h2.value());
}

TEST_CASE("errors carry their kind")
{
    try
    {
        throw_error(ErrorKind::MissingEntry, "x");
    }
    catch (const MissingEntry &e)
    {
        CHECK(e.kind() == ErrorKind::MissingEntry);
        CHECK(std::string(e.what()) == "x");
    }
}

TEST_CASE("parallel_for visits every index once and rethrows the lowest failure")
{
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, 4);
    for (auto &h : hits)
        CHECK(h.load() == 1);

    for (std::size_t workers : {1u, 3u})
    {
        try
        {
            parallel_for(
                100,
                [](std::size_t i) {
                    if (i == 70 || i == 30)
                        throw ConfigError("fail " + std::to_string(i));
                },
                workers);
            FAIL("expected a throw");
        }
        catch (const ConfigError &e)
        {
            CHECK(std::string(e.what()) == "fail 30");
        }
    }
}

TEST_CASE("worker_count honours DMIMO_THREADS")
{
    ::setenv("DMIMO_THREADS", "3", 1);
    CHECK(worker_count() == 3);
    ::setenv("DMIMO_THREADS", "junk", 1);
    CHECK(worker_count() >= 1);
    ::unsetenv("DMIMO_THREADS");
    CHECK(worker_count() >= 1);
}
