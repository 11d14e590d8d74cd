// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "common/error.hpp"
#include "common/units.hpp"
#include "mimo/mimo.hpp"
#include "support.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <numeric>

using namespace dmimo;
using test::random_matrix;
using test::rel_err;

namespace
{

// Exact maximum over allocations that are multiples of step: marginal gains
// of a separable concave objective decrease, so greedy increments are
// optimal on the lattice.
double lattice_oracle(const std::vector<double> &g, double n0, double total, double step)
{
    std::vector<double> p(g.size(), 0.0);
    const int units = static_cast<int>(std::llround(total / step));
    for (int u = 0; u < units; ++u)
    {
        std::size_t best = 0;
        double best_gain = -1;
        for (std::size_t i = 0; i < g.size(); ++i)
        {
            const double d = std::log2(1 + (p[i] + step) * g[i] / n0) - std::log2(1 + p[i] * g[i] / n0);
            if (d > best_gain)
            {
                best_gain = d;
                best = i;
            }
        }
        p[best] += step;
    }
    double c = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        c += std::log2(1 + p[i] * g[i] / n0);
    return c;
}

LinkChannel flat_link(const ComplexMatrix &h, int rbs)
{
    LinkChannel l;
    l.ap_ids = {1};
    for (int k = 0; k < rbs; ++k)
    {
        l.per_rb.push_back(h);
        l.rb_center_frequencies.push_back(3.7e9 + k * 360e3);
    }
    return l;
}

} // namespace

TEST_CASE("water-filling hand-computed cases")
{
    const std::vector<double> g{2.0, 1.0};
    const auto p = waterfill(g, 1.0, 1.0);
    CHECK(p[0] == doctest::Approx(0.75));
    CHECK(p[1] == doctest::Approx(0.25));
    CHECK(capacity_bits(p, g, 1.0) == doctest::Approx(std::log2(2.5) + std::log2(1.25)));

    const std::vector<double> weak{10.0, 0.1};
    const auto q = waterfill(weak, 1.0, 1.0);
    CHECK(q[0] == doctest::Approx(1.0));
    CHECK(q[1] == 0.0);

    const std::vector<double> zero{0.0, 3.0};
    const auto z = waterfill(zero, 1.0, 2.0);
    CHECK(z[0] == 0.0);
    CHECK(z[1] == doctest::Approx(2.0));
    CHECK(waterfill(g, 1.0, 0.0) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("water-filling: KKT conditions and lattice oracle")
{
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> lg(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial)
    {
        const std::size_t n = 2 + trial % 3;
        std::vector<double> g(n);
        for (auto &x : g)
            x = std::pow(10.0, lg(gen));
        const double n0 = 1.0, total = std::pow(10.0, lg(gen));
        const auto p = waterfill(g, n0, total);
        CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(total).epsilon(1e-12));
        double level = -1;
        for (std::size_t i = 0; i < n; ++i)
            if (p[i] > 0)
            {
                const double mu = p[i] + n0 / g[i];
                if (level < 0)
                    level = mu;
                CHECK(std::abs(mu - level) <= 1e-9 * level);
            }
        for (std::size_t i = 0; i < n; ++i)
            if (p[i] == 0)
                CHECK(n0 / g[i] >= level - 1e-12);
        CHECK(capacity_bits(p, g, n0) >= lattice_oracle(g, n0, total, total * 1e-3) - 1e-6);
    }
}

TEST_CASE("SVD precoding diagonalizes the channel")
{
    std::mt19937_64 gen(22);
    for (int layers = 1; layers <= 4; ++layers)
    {
        const ComplexMatrix h = random_matrix(gen, 4, 8);
        const auto s = precode_svd(h, layers);
        const Eigen::JacobiSVD<ComplexMatrix> ref(h);
        const ComplexMatrix eff = s.combiner * h * s.precoder;
        for (int i = 0; i < layers; ++i)
        {
            CHECK(s.gains[i] == doctest::Approx(std::pow(ref.singularValues()(i), 2)).epsilon(1e-12));
            CHECK(std::abs(eff(i, i)) == doctest::Approx(ref.singularValues()(i)).epsilon(1e-12));
            for (int j = 0; j < layers; ++j)
                if (i != j)
                    CHECK(std::abs(eff(i, j)) < 1e-12);
        }
    }
    CHECK_THROWS_AS(precode_svd(random_matrix(gen, 2, 4), 3), ConfigError);
}

TEST_CASE("ZF precoding nulls inter-layer interference")
{
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 100; ++trial)
    {
        const int rx = 2 + trial % 3, tx = rx + trial % 5;
        const int layers = 1 + trial % rx;
        const ComplexMatrix h = random_matrix(gen, rx, tx);
        const auto z = precode_zf(h, layers);
        const ComplexMatrix hl = h.topRows(layers);
        const ComplexMatrix eff = hl * z.precoder;
        double diag = 0, off = 0;
        for (int i = 0; i < layers; ++i)
            for (int j = 0; j < layers; ++j)
                (i == j ? diag : off) += std::norm(eff(i, j));
        CHECK(off < 1e-18 * diag);
        // Oracle: right inverse H^H (H H^H)^-1.
        const ComplexMatrix right = hl.adjoint() * (hl * hl.adjoint()).inverse();
        for (int i = 0; i < layers; ++i)
        {
            CHECK(z.gains[i] == doctest::Approx(1.0 / right.col(i).squaredNorm()).epsilon(1e-9));
            CHECK(z.precoder.col(i).norm() == doctest::Approx(1.0));
        }
    }
    const ComplexMatrix rank1 = test::random_rank(gen, 3, 4, 1);
    CHECK_THROWS_AS(precode_zf(rank1, 2), SingularChannel);
}

TEST_CASE("DL capacity on an identity-like flat channel")
{
    const double g = 1e-4;
    const ComplexMatrix h = g * ComplexMatrix::Identity(4, 4);
    const auto link = flat_link(h, 52);
    DlOptions o;
    o.layers = 4;
    o.total_power_dbm = 23;
    o.n0_dbm_per_rb = -118;
    const double budget = dbm_to_mw(23) / 52, n0 = dbm_to_mw(-118);
    const double expected = 4 * std::log2(1 + budget / 4 * g * g / n0);
    for (auto pre : {Precoder::Svd, Precoder::ZeroForcing})
    {
        o.precoder = pre;
        const auto r = dl_capacity(link, o);
        REQUIRE(r.per_rb_bits_per_hz.size() == 52);
        CHECK(r.mean_bits_per_hz == doctest::Approx(expected).epsilon(1e-12));
    }
    // Zero channel: no capacity and no exception.
    const auto zero = dl_capacity(flat_link(ComplexMatrix::Zero(4, 4), 3), o);
    CHECK(zero.mean_bits_per_hz == 0.0);
}

TEST_CASE("DL: SVD never loses to ZF with the same budget")
{
    std::mt19937_64 gen(24);
    for (int trial = 0; trial < 200; ++trial)
    {
        const int m = 4 * (1 + trial % 3);
        const ComplexMatrix h = 1e-4 * random_matrix(gen, m, 4);
        DlOptions o;
        o.layers = 1 + trial % 4;
        o.precoder = Precoder::Svd;
        const double svd = dl_capacity(flat_link(h, 2), o).mean_bits_per_hz;
        o.precoder = Precoder::ZeroForcing;
        const double zf = dl_capacity(flat_link(h, 2), o).mean_bits_per_hz;
        CHECK(svd >= zf - 1e-9);
    }
}

TEST_CASE("ZF singular RBs: error or zero capacity")
{
    std::mt19937_64 gen(25);
    const ComplexMatrix rank1 = 1e-4 * test::random_rank(gen, 4, 4, 1);
    DlOptions o;
    o.layers = 2;
    o.precoder = Precoder::ZeroForcing;
    CHECK_THROWS_AS(dl_capacity(flat_link(rank1, 2), o), SingularChannel);
    o.singular_as_zero = true;
    const auto r = dl_capacity(flat_link(rank1, 2), o);
    CHECK(r.singular_rbs == 2);
    CHECK(r.mean_bits_per_hz == 0.0);
}

TEST_CASE("UL ZF capacity")
{
    const double g = 2e-5, p = dbm_to_mw(17) / 52, n0 = dbm_to_mw(-118);
    const auto r = ul_zf_capacity(flat_link(g * ComplexMatrix::Identity(8, 4).eval(), 52), p, n0);
    CHECK(r.mean_bits_per_hz == doctest::Approx(4 * std::log2(1 + p * g * g / n0)).epsilon(1e-12));

    // General channel against the explicit Gram inverse.
    std::mt19937_64 gen(26);
    const ComplexMatrix h = 1e-5 * random_matrix(gen, 8, 4);
    const ComplexMatrix inv = (h.adjoint() * h).inverse();
    double want = 0;
    for (int i = 0; i < 4; ++i)
        want += std::log2(1 + p / (n0 * inv(i, i).real()));
    CHECK(ul_zf_capacity(flat_link(h, 1), p, n0).mean_bits_per_hz == doctest::Approx(want).epsilon(1e-10));

    const auto s = ul_zf_capacity(flat_link(test::random_rank(gen, 8, 4, 2), 3), p, n0);
    CHECK(s.singular_rbs == 3);
    CHECK(s.mean_bits_per_hz == 0.0);
}

TEST_CASE("stream rank counts streams above the threshold")
{
    ComplexMatrix h = ComplexMatrix::Zero(4, 4);
    // sigma^2 = 1e-9, 1e-10, 1e-11, 1e-13 (mW gain); p = 1 mW -> -90 .. -130 dBm.
    const double s2[] = {1e-9, 1e-10, 1e-11, 1e-13};
    for (int i = 0; i < 4; ++i)
        h(i, (i + 1) % 4) = std::sqrt(s2[i]);
    const auto pw = stream_powers_dbm(h, 1.0);
    CHECK(pw[0] == doctest::Approx(-90));
    CHECK(pw[3] == doctest::Approx(-130));
    CHECK(stream_rank(h, 1.0, -100) == 2);
    CHECK(stream_rank(h, 1.0, -110) == 3);
    CHECK(stream_rank(h, 10.0, -100) == 3);
    CHECK(stream_rank(ComplexMatrix::Zero(4, 4), 1.0, -100) == 0);
}
