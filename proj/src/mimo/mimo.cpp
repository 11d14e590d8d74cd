// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#include "mimo/mimo.hpp"

#include "common/error.hpp"
#include "common/units.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dmimo
{

const char *precoder_name(Precoder p) { return p == Precoder::ZeroForcing ? "zf" : "svd"; }

std::vector<double> waterfill(std::span<const double> gains, double n0, double total_power)
{
    const std::size_t n = gains.size();
    std::vector<double> powers(n, 0.0);
    if (n == 0 || !(total_power > 0.0))
        return powers;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return gains[a] > gains[b]; });

    // Floors n0 / g_i ascending; grow the active set while the water level
    // stays above the next floor.
    double floor_sum = 0.0;
    double level = 0.0;
    std::size_t active = 0;
    for (std::size_t k = 0; k < n; ++k)
    {
        const double g = gains[order[k]];
        if (!(g > 0.0))
            break;
        const double floor = n0 / g;
        const double candidate = (total_power + floor_sum + floor) / static_cast<double>(k + 1);
        if (candidate <= floor)
            break;
        floor_sum += floor;
        level = candidate;
        active = k + 1;
    }
    for (std::size_t k = 0; k < active; ++k)
        powers[order[k]] = std::max(0.0, level - n0 / gains[order[k]]);
    return powers;
}

double capacity_bits(std::span<const double> powers, std::span<const double> gains, double n0)
{
    double c = 0.0;
    for (std::size_t i = 0; i < powers.size(); ++i)
        c += std::log2(1.0 + powers[i] * gains[i] / n0);
    return c;
}

SvdPrecoding precode_svd(const ComplexMatrix &h, int layers)
{
    if (layers < 1 || layers > std::min(h.rows(), h.cols()))
        throw ConfigError("layer count must lie in [1, min(M, N)]");
    const Svd d = svd(h);
    SvdPrecoding out;
    out.precoder = d.right.leftCols(layers);
    out.combiner = d.left.leftCols(layers).adjoint();
    for (int i = 0; i < layers; ++i)
        out.gains.push_back(d.singular[i] * d.singular[i]);
    return out;
}

ZfPrecoding precode_zf(const ComplexMatrix &h, int layers)
{
    if (layers < 1 || layers > std::min(h.rows(), h.cols()))
        throw ConfigError("layer count must lie in [1, min(M, N)]");
    const ComplexMatrix rows = h.topRows(layers);
    const auto pi = pseudo_inverse(rows);
    if (pi.rank < layers)
        throw SingularChannel("channel rank " + std::to_string(pi.rank) + " is below " + std::to_string(layers) +
                              " layers");
    ZfPrecoding out;
    out.precoder = pi.matrix;
    for (int i = 0; i < layers; ++i)
    {
        const double norm = out.precoder.col(i).norm();
        out.precoder.col(i) /= norm;
        out.gains.push_back(1.0 / (norm * norm));
    }
    return out;
}

namespace
{

void finish(CapacityResult &r)
{
    if (r.per_rb_bits_per_hz.empty())
        return;
    // Pairwise summation keeps the mean independent of any parallel split.
    std::vector<double> v = r.per_rb_bits_per_hz;
    while (v.size() > 1)
    {
        std::vector<double> next((v.size() + 1) / 2);
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = v[2 * i] + (2 * i + 1 < v.size() ? v[2 * i + 1] : 0.0);
        v = std::move(next);
    }
    r.mean_bits_per_hz = v[0] / static_cast<double>(r.per_rb_bits_per_hz.size());
}

} // namespace

CapacityResult dl_capacity(const LinkChannel &link, const DlOptions &o)
{
    CapacityResult r;
    const double n0 = dbm_to_mw(o.n0_dbm_per_rb);
    const double budget = dbm_to_mw(o.total_power_dbm) / static_cast<double>(std::max<std::size_t>(link.per_rb.size(), 1));
    for (const auto &h_net : link.per_rb)
    {
        const ComplexMatrix h = h_net.transpose(); // N x M, as seen by the UE
        std::vector<double> sinr_db;
        if (h.squaredNorm() == 0.0)
        {
            r.per_rb_bits_per_hz.push_back(0.0);
            r.per_layer_sinr_db.push_back({});
            continue;
        }
        std::vector<double> gains;
        if (o.precoder == Precoder::Svd)
        {
            gains = precode_svd(h, o.layers).gains;
        }
        else
        {
            try
            {
                gains = precode_zf(h, o.layers).gains;
            }
            catch (const SingularChannel &)
            {
                if (!o.singular_as_zero)
                    throw;
                ++r.singular_rbs;
                r.per_rb_bits_per_hz.push_back(0.0);
                r.per_layer_sinr_db.push_back({});
                continue;
            }
        }
        // Modes with zero gain carry nothing; waterfill skips them.
        const auto p = waterfill(gains, n0, budget);
        for (std::size_t i = 0; i < gains.size(); ++i)
            sinr_db.push_back(power_to_db(p[i] * gains[i] / n0));
        r.per_rb_bits_per_hz.push_back(capacity_bits(p, gains, n0));
        r.per_layer_sinr_db.push_back(std::move(sinr_db));
    }
    finish(r);
    return r;
}

CapacityResult ul_zf_capacity(const LinkChannel &link, double power_per_antenna_mw, double n0_mw)
{
    CapacityResult r;
    for (const auto &h : link.per_rb)
    {
        if (h.rows() < h.cols())
            throw ConfigError("uplink ZF needs at least as many network antennas as UE antennas");
        std::vector<double> sinr_db;
        double c = 0.0;
        try
        {
            const auto d = gram_inverse_diagonal(h);
            for (Eigen::Index i = 0; i < d.size(); ++i)
            {
                const double sinr = power_per_antenna_mw / (n0_mw * d[i]);
                sinr_db.push_back(power_to_db(sinr));
                c += std::log2(1.0 + sinr);
            }
        }
        catch (const SingularGram &)
        {
            ++r.singular_rbs;
        }
        r.per_rb_bits_per_hz.push_back(c);
        r.per_layer_sinr_db.push_back(std::move(sinr_db));
    }
    finish(r);
    return r;
}

std::vector<double> stream_powers_dbm(const ComplexMatrix &h, double power_per_antenna_mw)
{
    std::vector<double> out;
    if (h.size() == 0)
        return out;
    const Svd d = svd(h);
    for (Eigen::Index i = 0; i < d.singular.size(); ++i)
        out.push_back(mw_to_dbm(power_per_antenna_mw * d.singular[i] * d.singular[i]));
    return out;
}

int stream_rank(const ComplexMatrix &h, double power_per_antenna_mw, double threshold_dbm)
{
    int rank = 0;
    for (double p : stream_powers_dbm(h, power_per_antenna_mw))
        if (p >= threshold_dbm)
            ++rank;
    return rank;
}

} // namespace dmimo
