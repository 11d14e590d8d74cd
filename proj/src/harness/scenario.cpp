// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#include "harness/scenario.hpp"

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/units.hpp"
#include "harness/parallel.hpp"
#include "mimo/mimo.hpp"

#include <algorithm>
#include <cmath>

namespace dmimo
{
namespace
{

// Rethrows a module error with the failing link attached.
template <typename F>
auto with_context(const std::string &where, F &&f) -> decltype(f())
{
    try
    {
        return f();
    }
    catch (const Error &e)
    {
        throw_error(e.kind(), where + ": " + e.what());
    }
}

std::string link_label(int ap, int ue)
{
    return "AP " + std::to_string(ap) + " / UE " + std::to_string(ue);
}

// Keeps the first `n` UE antennas (columns) of every RB.
LinkChannel keep_ue_antennas(const LinkChannel &link, Eigen::Index n)
{
    if (n >= link.cols())
        return link;
    LinkChannel out = link;
    for (auto &h : out.per_rb)
        h = ComplexMatrix(h.leftCols(n));
    return out;
}

// Lower median of per-RB stream ranks.
int median_rank(const LinkChannel &link, double p_mw, double threshold_dbm)
{
    if (link.per_rb.empty())
        return 0;
    std::vector<int> ranks;
    ranks.reserve(link.per_rb.size());
    for (const auto &h : link.per_rb)
        ranks.push_back(stream_rank(h, p_mw, threshold_dbm));
    std::sort(ranks.begin(), ranks.end());
    return ranks[(ranks.size() - 1) / 2];
}

} // namespace

TraceOutput build_channel_database(const SimulationConfig &cfg, std::uint64_t seed)
{
    const Scene &scene = cfg.scene;
    const RadioConfig &radio = scene.radio();
    const auto ues = cfg.ue_sites();
    const auto &aps = cfg.aps;
    if (ues.empty())
        throw EmptyInput("UE grid is empty");

    const std::size_t n_links = aps.size() * ues.size();
    auto link_at = [&](std::size_t i) { return std::pair{i / ues.size(), i % ues.size()}; };

    // Geometry first: it does not depend on the XPR correction.
    std::vector<std::vector<RayPath>> geometry(n_links);
    parallel_for(n_links, [&](std::size_t i) {
        const auto [a, u] = link_at(i);
        geometry[i] = with_context(link_label(aps[a].id, ues[u].id), [&] {
            return trace_geometry(scene, aps[a].position, ues[u].position, cfg.budget);
        });
    });

    std::vector<std::vector<std::vector<InteractionDraw>>> draws(n_links);
    parallel_for(n_links, [&](std::size_t i) {
        const auto [a, u] = link_at(i);
        const LinkStream stream{seed, aps[a].id, ues[u].id};
        draws[i].reserve(geometry[i].size());
        for (std::size_t p = 0; p < geometry[i].size(); ++p)
            draws[i].push_back(draw_interactions(geometry[i][p], stream, static_cast<int>(p)));
    });

    TraceOutput out;
    XprCalibration cal = cfg.xpr;
    if (cfg.calibrate_xpr)
    {
        std::vector<CalibrationRay> rays;
        for (std::size_t i = 0; i < n_links; ++i)
        {
            const bool los_link = !geometry[i].empty() && geometry[i].front().is_los;
            for (std::size_t p = 0; p < geometry[i].size(); ++p)
                if (!geometry[i][p].interactions.empty())
                    rays.push_back(CalibrationRay{geometry[i][p], los_link, draws[i][p]});
        }
        out.calibration = calibrate_xpr(rays, cal);
        out.calibrated = true;
        cal = out.calibration.calibration;
    }

    std::vector<LinkChannel> links(n_links);
    parallel_for(n_links, [&](std::size_t i) {
        const auto [a, u] = link_at(i);
        auto &paths = geometry[i];
        const bool los_link = !paths.empty() && paths.front().is_los;
        for (std::size_t p = 0; p < paths.size(); ++p)
            paths[p].pol_gain = path_polarization(paths[p], cal, los_link, draws[i][p]);
        links[i] = assemble_rt_channel(paths, aps[a].array, ues[u].array, radio, aps[a].id, ues[u].id);
    });

    ChannelDatabase &db = out.database;
    db.scene_digest = scene.digest();
    db.seed = seed;
    db.model = ChannelModel::RayTracing;
    db.carrier_frequency = radio.carrier_frequency;
    db.rb_center_frequencies = radio.rb_center_frequencies();
    db.ap_antennas = static_cast<std::uint32_t>(cfg.ap_array.element_count());
    db.ue_antennas = static_cast<std::uint32_t>(cfg.ue_array.element_count());
    for (const auto &a : aps)
        db.ap_ids.push_back(a.id);
    for (const auto &u : ues)
        db.ue_ids.push_back(u.id);
    for (std::size_t i = 0; i < n_links; ++i)
    {
        out.path_count += geometry[i].size();
        const auto [a, u] = link_at(i);
        db.entries.emplace(std::pair{aps[a].id, ues[u].id}, std::move(links[i]));
    }

    return out;
}

std::vector<CoherenceRow> coherence_table(const ChannelDatabase &db, double threshold)
{
    std::vector<CoherenceRow> rows;
    for (const auto &[key, link] : db.entries)
    {
        if (link.empty || link.mean_power() == 0.0)
            continue;
        const double bc =
            with_context(link_label(key.first, key.second), [&] { return coherence_bandwidth(link, threshold); });
        rows.push_back(CoherenceRow{key.first, key.second, bc, -power_to_db(link.mean_power())});
    }
    return rows;
}

const std::vector<std::string> &distribution_metrics()
{
    static const std::vector<std::string> names{"rsrp_best_dbm", "los_count", "detected_count", "rel2_db", "rel3_db",
                                                "rank", "cap_dl_zf", "cap_dl_svd", "cap_ul"};
    return names;
}

double metric_value(const UeRow &r, const std::string &m)
{
    if (m == "rsrp_best_dbm")
        return floor_dbm(r.rsrp_best_dbm);
    if (m == "los_count")
        return r.los_count;
    if (m == "detected_count")
        return r.detected_count;
    if (m == "rel2_db")
        return floor_dbm(r.rel2_db);
    if (m == "rel3_db")
        return floor_dbm(r.rel3_db);
    if (m == "rank")
        return r.rank;
    if (m == "cap_dl_zf")
        return r.cap_dl_zf;
    if (m == "cap_dl_svd")
        return r.cap_dl_svd;
    if (m == "cap_ul")
        return r.cap_ul;
    throw ConfigError("unknown metric '" + m + "'");
}

std::uint64_t config_digest(const SimulationConfig &cfg, const ScenarioConfig &sc)
{
    Fnv1a h;
    h.text(cfg.source_text).text(sc.canonical()).u64(cfg.scene.digest());
    return h.value();
}

std::uint64_t database_digest(const ChannelDatabase &db)
{
    Fnv1a h;
    h.u64(db.scene_digest).u64(db.seed).u64(static_cast<std::uint64_t>(db.model)).f64(db.carrier_frequency);
    for (double f : db.rb_center_frequencies)
        h.f64(f);
    for (const auto &[key, link] : db.entries)
    {
        h.i64(key.first).i64(key.second).u64(link.empty ? 1 : 0);
        for (const auto &m : link.per_rb)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                for (Eigen::Index i = 0; i < m.rows(); ++i)
                    h.f64(m(i, j).real()).f64(m(i, j).imag());
    }
    return h.value();
}

ScenarioResult run_scenario(const SimulationConfig &cfg, const ScenarioConfig &sc, const ChannelDatabase &rt_db)
{
    ScenarioResult result;
    result.scenario = sc;
    result.resolved = resolve_scenario(cfg, sc);
    result.config_digest = config_digest(cfg, sc);
    result.scene_digest = cfg.scene.digest();
    if (rt_db.scene_digest != cfg.scene.digest())
        throw DigestMismatch("channel database was built for a different scene");
    if (rt_db.model != ChannelModel::RayTracing)
        throw ConfigError("scenario evaluation expects a ray-traced channel database");
    result.database_digest = database_digest(rt_db);

    const auto &candidates = result.resolved.candidates;
    const std::size_t a = candidates.size();
    const std::size_t b = static_cast<std::size_t>(result.resolved.active);

    Deployment dep = cfg.deployment(sc.deployment);
    if (dep.ues.empty())
        throw EmptyInput("UE grid is empty");
    const auto &power = cfg.power;
    const TxPowerModel tx{sc.tx_model,
                          sc.tx_model == TxPowerKind::ConstantPerAp ? power.per_ap_dbm : power.network_dbm};
    const int rb_count = cfg.scene.radio().rb_count;
    const double spread = power.spread_over_rbs ? static_cast<double>(rb_count) : 1.0;
    const double ul_p_mw = dbm_to_mw(power.ul_per_antenna_dbm) / spread;
    const double rank_p_mw = dbm_to_mw(power.rank_per_antenna_dbm) / spread;
    const double n0_mw = dbm_to_mw(power.noise_dbm_per_rb);

    DlOptions dl;
    dl.layers = sc.layers;
    dl.total_power_dbm = power.dl_total_dbm;
    dl.n0_dbm_per_rb = power.noise_dbm_per_rb;
    dl.singular_as_zero = true;

    result.rows.resize(dep.ues.size());
    parallel_for(dep.ues.size(), [&](std::size_t i) {
        const Site &ue = dep.ues[i];
        UeRow &row = result.rows[i];
        row.ue_id = ue.id;
        row.x = ue.position.x();
        row.y = ue.position.y();

        const std::string where = "UE " + std::to_string(ue.id);
        with_context(where, [&] {
            std::vector<ApValue> rsrp;
            rsrp.reserve(a);
            for (int id : candidates)
                rsrp.emplace_back(id, with_context(link_label(id, ue.id),
                                                   [&] { return rsrp_dbm(rt_db.at(id, ue.id), tx, a); }));

            const DetectionStats det = detection_stats(rsrp, power.detection_threshold_dbm);
            row.best_ap = det.best_server;
            row.detected_count = det.detected;
            row.rel2_db = det.relative_2nd_db;
            row.rel3_db = det.relative_3rd_db;
            for (const auto &[id, v] : rsrp)
                if (id == det.best_server)
                    row.rsrp_best_dbm = v;
            row.los_count = los_count(cfg.scene, dep, ue.position);

            row.selected_aps = select_aps(rsrp, b);
            LinkChannel h = stack_channels(rt_db, row.selected_aps, ue.id);
            LinkChannel best = rt_db.at(det.best_server, ue.id);
            if (sc.channel == ChannelModel::Rayleigh)
            {
                h = synthesize_rayleigh(h, sc.seed);
                best = synthesize_rayleigh(best, sc.seed);
            }

            row.rank = median_rank(best, rank_p_mw, power.rank_threshold_dbm_per_rb);

            DlOptions zf_opt = dl;
            zf_opt.precoder = Precoder::ZeroForcing;
            const auto zf = dl_capacity(h, zf_opt);
            DlOptions svd_opt = dl;
            svd_opt.precoder = Precoder::Svd;
            const auto svd = dl_capacity(h, svd_opt);
            const auto ul = ul_zf_capacity(keep_ue_antennas(h, sc.layers), ul_p_mw, n0_mw);
            row.cap_dl_zf = zf.mean_bits_per_hz;
            row.cap_dl_svd = svd.mean_bits_per_hz;
            row.cap_ul = ul.mean_bits_per_hz;
            row.singular_rbs = zf.singular_rbs + ul.singular_rbs;
            return 0;
        });
    });

    std::sort(result.rows.begin(), result.rows.end(),
              [](const UeRow &l, const UeRow &r) { return l.ue_id < r.ue_id; });

    for (const auto &m : distribution_metrics())
    {
        std::vector<double> v;
        v.reserve(result.rows.size());
        for (const auto &r : result.rows)
            v.push_back(metric_value(r, m));
        result.distributions.emplace_back(m, aggregate(v));
    }

    for (const auto &r : result.rows)
    {
        double c = r.cap_ul;
        if (sc.link == LinkDirection::Downlink)
            c = sc.precoder == Precoder::Svd ? r.cap_dl_svd : r.cap_dl_zf;
        result.capacity_map.push_back(CapacityCell{r.x, r.y, c});
    }
    return result;
}

} // namespace dmimo
