// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#include "chanmodel/channel.hpp"

#include "common/error.hpp"
#include "common/rng.hpp"
#include "common/units.hpp"

#include <cmath>
#include <numbers>

namespace dmimo
{

const char *channel_model_name(ChannelModel model)
{
    return model == ChannelModel::RayTracing ? "rt" : "rayleigh";
}

double LinkChannel::mean_power() const
{
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto &h : per_rb)
    {
        sum += h.squaredNorm();
        count += static_cast<std::size_t>(h.size());
    }
    return count ? sum / static_cast<double>(count) : 0.0;
}

Mat2c xpd_leakage(double xpd_db)
{
    const double k = std::isinf(xpd_db) ? 0.0 : db_to_amplitude(-xpd_db);
    const double norm = 1.0 / std::sqrt(1.0 + k * k);
    Mat2c m;
    m << norm, norm * k, norm * k, norm;
    return m;
}

LinkChannel assemble_rt_channel(std::span<const RayPath> paths, const ArrayConfig &ap_array,
                                const ArrayConfig &ue_array, const RadioConfig &radio, int ap_id, int ue_id)
{
    using cd = std::complex<double>;
    const auto tx = array_elements(ap_array, radio.carrier_frequency);
    const auto rx = array_elements(ue_array, radio.carrier_frequency);
    const Mat2c tx_xpd = xpd_leakage(ap_array.xpd_db);
    const Mat2c rx_xpd = xpd_leakage(ue_array.xpd_db);

    LinkChannel link;
    link.ap_ids = {ap_id};
    link.ue_id = ue_id;
    link.model = ChannelModel::RayTracing;
    link.rb_center_frequencies = radio.rb_center_frequencies();
    link.empty = paths.empty();

    const auto m = static_cast<Eigen::Index>(tx.size());
    const auto n = static_cast<Eigen::Index>(rx.size());

    // Polarimetric coupling per (path, tx element, rx element) is frequency
    // independent; only the propagation and array phases vary with f.
    struct PathTerms
    {
        ComplexMatrix coupling; // m x n
        Eigen::VectorXd tx_shift; // departure . offset, m
        Eigen::VectorXd rx_shift; // arrival . offset, n
    };
    std::vector<PathTerms> terms;
    terms.reserve(paths.size());
    for (const auto &p : paths)
    {
        PathTerms t;
        const Mat2c pol = rx_xpd * p.pol_gain * tx_xpd;
        t.coupling.resize(m, n);
        t.tx_shift.resize(m);
        t.rx_shift.resize(n);
        for (Eigen::Index i = 0; i < m; ++i)
        {
            t.tx_shift[i] = p.departure.dot(tx[i].offset);
            for (Eigen::Index j = 0; j < n; ++j)
                t.coupling(i, j) = rx[j].jones.cast<cd>().dot(pol * tx[i].jones.cast<cd>());
        }
        for (Eigen::Index j = 0; j < n; ++j)
            t.rx_shift[j] = p.arrival.dot(rx[j].offset);
        terms.push_back(std::move(t));
    }

    link.per_rb.reserve(link.rb_center_frequencies.size());
    Eigen::VectorXcd rx_phase(n);
    for (double f : link.rb_center_frequencies)
    {
        const double k = 2.0 * std::numbers::pi * f / speed_of_light;
        ComplexMatrix h = ComplexMatrix::Zero(m, n);
        for (std::size_t pi = 0; pi < paths.size(); ++pi)
        {
            const auto &p = paths[pi];
            const auto &t = terms[pi];
            const double spread = wavelength(radio.carrier_frequency) / (4.0 * std::numbers::pi * p.length);
            const cd base = spread * std::polar(1.0, -2.0 * std::numbers::pi * f * p.delay);
            for (Eigen::Index j = 0; j < n; ++j)
                rx_phase[j] = std::polar(1.0, -k * t.rx_shift[j]);
            for (Eigen::Index i = 0; i < m; ++i)
            {
                const cd tx_phase = base * std::polar(1.0, k * t.tx_shift[i]);
                for (Eigen::Index j = 0; j < n; ++j)
                    h(i, j) += tx_phase * rx_phase[j] * t.coupling(i, j);
            }
        }
        link.per_rb.push_back(std::move(h));
    }
    return link;
}

LinkChannel synthesize_rayleigh(const LinkChannel &rt, std::uint64_t seed)
{
    LinkChannel out = rt;
    out.model = ChannelModel::Rayleigh;
    const auto aps = static_cast<Eigen::Index>(std::max<std::size_t>(rt.ap_ids.size(), 1));
    const Eigen::Index rows = rt.rows();
    if (rows % aps != 0)
        throw ConfigError("stacked link rows are not divisible by its AP count");
    const Eigen::Index block = rows / aps;
    for (std::size_t k = 0; k < rt.per_rb.size(); ++k)
    {
        const auto &h = rt.per_rb[k];
        auto &g = out.per_rb[k];
        for (Eigen::Index r = 0; r < rows; ++r)
        {
            const int ap = rt.ap_ids.empty() ? 0 : rt.ap_ids[static_cast<std::size_t>(r / block)];
            for (Eigen::Index c = 0; c < h.cols(); ++c)
            {
                auto rng = StreamRng::keyed({seed, 0x5241594cULL, static_cast<std::uint64_t>(ap),
                                             static_cast<std::uint64_t>(rt.ue_id), k,
                                             static_cast<std::uint64_t>(r % block), static_cast<std::uint64_t>(c)});
                g(r, c) = std::abs(h(r, c)) * rng.complex_normal();
            }
        }
    }
    return out;
}

double coherence_bandwidth(const LinkChannel &link, double correlation_threshold)
{
    using cd = std::complex<double>;
    const std::size_t kcount = link.per_rb.size();
    if (kcount < 2)
        throw ConfigError("coherence bandwidth needs at least two RBs");
    if (!(correlation_threshold > 0.0 && correlation_threshold < 1.0))
        throw ConfigError("correlation threshold must lie in (0, 1)");
    if (link.mean_power() == 0.0)
        throw DegenerateChannel("all-zero link has no coherence bandwidth");

    const double spacing = (link.rb_center_frequencies.back() - link.rb_center_frequencies.front()) / (kcount - 1);

    auto correlation = [&](std::size_t lag) {
        cd cross = 0.0;
        double p0 = 0.0;
        double p1 = 0.0;
        for (std::size_t k = 0; k + lag < kcount; ++k)
        {
            const auto &a = link.per_rb[k];
            const auto &b = link.per_rb[k + lag];
            cross += (a.array() * b.array().conjugate()).sum();
            p0 += a.squaredNorm();
            p1 += b.squaredNorm();
        }
        if (p0 == 0.0 || p1 == 0.0)
            return 0.0;
        return std::abs(cross) / std::sqrt(p0 * p1);
    };

    double prev = 1.0;
    for (std::size_t lag = 1; lag < kcount; ++lag)
    {
        const double r = correlation(lag);
        if (r < correlation_threshold)
        {
            const double frac = (prev - correlation_threshold) / (prev - r);
            return (static_cast<double>(lag - 1) + frac) * spacing;
        }
        prev = r;
    }
    return static_cast<double>(kcount) * spacing;
}

LinkChannel stack_links(std::span<const LinkChannel *const> links)
{
    if (links.empty())
        throw MissingEntry("no links to stack");
    const LinkChannel &first = *links.front();
    LinkChannel out;
    out.ue_id = first.ue_id;
    out.model = first.model;
    out.rb_center_frequencies = first.rb_center_frequencies;
    out.empty = true;

    Eigen::Index rows = 0;
    for (const auto *l : links)
    {
        if (l->per_rb.size() != first.per_rb.size() || l->cols() != first.cols() || l->model != first.model ||
            l->ue_id != first.ue_id)
            throw ConfigError("cannot stack links with different RB grids, models or UEs");
        rows += l->rows();
        out.ap_ids.insert(out.ap_ids.end(), l->ap_ids.begin(), l->ap_ids.end());
        out.empty = out.empty && l->empty;
    }
    out.per_rb.resize(first.per_rb.size());
    for (std::size_t k = 0; k < first.per_rb.size(); ++k)
    {
        ComplexMatrix h(rows, first.cols());
        Eigen::Index r = 0;
        for (const auto *l : links)
        {
            h.middleRows(r, l->rows()) = l->per_rb[k];
            r += l->rows();
        }
        out.per_rb[k] = std::move(h);
    }
    return out;
}

} // namespace dmimo
