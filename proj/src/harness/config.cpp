// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#include "harness/config.hpp"

#include "common/error.hpp"
#include "common/hash.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace dmimo
{
namespace
{

[[noreturn]] void fail(const YAML::Node &node, const std::string &msg)
{
    std::ostringstream os;
    os << msg;
    if (node.IsDefined() && node.Mark().line >= 0)
        os << " (line " << node.Mark().line + 1 << ")";
    throw ConfigError(os.str());
}

template <typename T>
T get(const YAML::Node &parent, const char *key, T fallback)
{
    if (!parent || !parent.IsMap())
        return fallback;
    const YAML::Node n = parent[key];
    if (!n)
        return fallback;
    try
    {
        return n.as<T>();
    }
    catch (const YAML::Exception &)
    {
        fail(n, std::string("bad value for '") + key + "'");
    }
}

template <typename T>
T require(const YAML::Node &parent, const char *key)
{
    const YAML::Node n = parent[key];
    if (!n)
        fail(parent, std::string("missing key '") + key + "'");
    return get<T>(parent, key, T{});
}

Vec3 read_vec3(const YAML::Node &n, const char *what)
{
    if (!n.IsSequence() || n.size() != 3)
        fail(n, std::string(what) + " must be a list of 3 numbers");
    Vec3 v;
    for (int i = 0; i < 3; ++i)
    {
        try
        {
            v[i] = n[i].as<double>();
        }
        catch (const YAML::Exception &)
        {
            fail(n, std::string(what) + " must be numeric");
        }
    }
    return v;
}

Box read_box(const YAML::Node &n)
{
    return Box{read_vec3(n["min"], "box min"), read_vec3(n["max"], "box max")};
}

Polarization parse_pol(const YAML::Node &n)
{
    const auto s = n.as<std::string>();
    if (s == "V" || s == "v")
        return Polarization::V;
    if (s == "H" || s == "h")
        return Polarization::H;
    fail(n, "polarization must be V or H, got '" + s + "'");
}

ArrayConfig read_array(const YAML::Node &n)
{
    ArrayConfig a;
    a.polarizations = {Polarization::V, Polarization::H, Polarization::V, Polarization::H};
    if (!n)
        return a;
    if (const auto p = n["polarizations"])
    {
        if (!p.IsSequence())
            fail(p, "polarizations must be a list");
        a.polarizations.clear();
        for (const auto &e : p)
            a.polarizations.push_back(parse_pol(e));
    }
    a.co_pol_spacing = get(n, "co_pol_spacing", a.co_pol_spacing);
    a.xpd_db = get(n, "xpd_db", a.xpd_db);
    if (n["orientation"])
        a.orientation = read_vec3(n["orientation"], "orientation");
    a.validate();
    return a;
}

void read_radio(const YAML::Node &n, RadioConfig &r)
{
    if (!n)
        return;
    r.carrier_frequency = get(n, "carrier_hz", r.carrier_frequency);
    r.bandwidth = get(n, "bandwidth_hz", r.bandwidth);
    r.rb_count = get(n, "rb_count", r.rb_count);
    r.subcarriers_per_rb = get(n, "subcarriers_per_rb", r.subcarriers_per_rb);
    r.subcarrier_spacing = get(n, "subcarrier_spacing_hz", r.subcarrier_spacing);
}

// rack_rows: each row places `count` racks of `size` along x starting at
// x0 with `gap` between them, centred on y.
void expand_rack_rows(const YAML::Node &rows, std::vector<ObstacleSpec> &out)
{
    if (!rows)
        return;
    if (!rows.IsSequence())
        fail(rows, "rack_rows must be a list");
    int row_index = 0;
    for (const auto &row : rows)
    {
        const int count = require<int>(row, "count");
        const double x0 = require<double>(row, "x0");
        const double y = require<double>(row, "y");
        const double gap = get(row, "gap", 0.0);
        const Vec3 size = read_vec3(row["size"], "rack size");
        const std::string material = get<std::string>(row, "material", "metal");
        if (count < 1)
            fail(row, "rack row count must be >= 1");
        if (gap < 0)
            fail(row, "rack row gap must be >= 0");
        for (int i = 0; i < count; ++i)
        {
            ObstacleSpec o;
            o.name = "rack_" + std::to_string(row_index) + "_" + std::to_string(i);
            o.box.min = Vec3(x0 + i * (size.x() + gap), y - size.y() / 2, 0.0);
            o.box.max = o.box.min + size;
            o.material = material;
            out.push_back(o);
        }
        ++row_index;
    }
}

SceneDescription read_scene(const YAML::Node &root)
{
    SceneDescription d;
    read_radio(root["radio"], d.radio);

    const YAML::Node room = root["room"];
    if (!room)
        fail(root, "missing 'room'");
    const Vec3 size = read_vec3(room["size"], "room size");
    d.bounds = Box{Vec3::Zero(), size};
    d.room_materials.fill("concrete");
    if (const auto walls = room["materials"])
    {
        static const char *names[6] = {"x_min", "x_max", "y_min", "y_max", "floor", "ceiling"};
        for (int i = 0; i < 6; ++i)
            d.room_materials[i] = get<std::string>(walls, names[i], d.room_materials[i]);
    }

    if (const auto mats = root["materials"])
    {
        if (!mats.IsMap())
            fail(mats, "materials must be a map");
        for (const auto &kv : mats)
        {
            Material m;
            m.name = kv.first.as<std::string>();
            m.relative_permittivity = get(kv.second, "permittivity", 1.0);
            m.conductivity = get(kv.second, "conductivity", 0.0);
            m.is_perfect_conductor = get(kv.second, "perfect_conductor", false);
            d.materials.push_back(m);
        }
    }

    if (const auto obs = root["obstacles"])
    {
        if (!obs.IsSequence())
            fail(obs, "obstacles must be a list");
        int i = 0;
        for (const auto &o : obs)
        {
            ObstacleSpec s;
            s.name = get<std::string>(o, "name", "obstacle_" + std::to_string(i++));
            s.box = read_box(o);
            s.material = get<std::string>(o, "material", "metal");
            d.obstacles.push_back(s);
        }
    }
    expand_rack_rows(root["rack_rows"], d.obstacles);
    d.horizontal_edges = get(root["tracing"], "horizontal_edges", false);
    return d;
}

ScenarioConfig read_scenario(const YAML::Node &n)
{
    ScenarioConfig s;
    if (!n)
        return s;
    s.deployment = get<std::string>(n, "deployment", "");
    if (n["tx_model"])
        s.tx_model = parse_tx_model(n["tx_model"].as<std::string>());
    if (n["channel"])
        s.channel = parse_channel_model(n["channel"].as<std::string>());
    if (n["link"])
        s.link = parse_link(n["link"].as<std::string>());
    if (n["precoder"])
        s.precoder = parse_precoder(n["precoder"].as<std::string>());
    s.layers = get(n, "layers", s.layers);
    if (const auto c = n["coop"])
    {
        if (!c.IsSequence() || c.size() != 2)
            fail(c, "coop must be [a, b]");
        s.coop = std::make_pair(c[0].as<int>(), c[1].as<int>());
    }
    s.seed = get<std::uint64_t>(n, "seed", s.seed);
    return s;
}

SimulationConfig build(const YAML::Node &root, const std::string &text, const std::string &path)
{
    if (!root.IsMap())
        throw ConfigError("configuration root must be a map");
    SimulationConfig cfg;
    cfg.source_path = path;
    cfg.source_text = text;
    cfg.scene_description = read_scene(root);
    cfg.scene = build_scene(cfg.scene_description);

    const YAML::Node arrays = root["arrays"];
    cfg.ap_array = read_array(arrays ? arrays["ap"] : YAML::Node());
    cfg.ue_array = read_array(arrays ? arrays["ue"] : YAML::Node());

    const YAML::Node aps = root["aps"];
    if (!aps || !aps.IsSequence() || aps.size() == 0)
        fail(root, "'aps' must be a non-empty list");
    for (const auto &a : aps)
        cfg.aps.push_back(Site{require<int>(a, "id"), read_vec3(a["position"], "AP position"), cfg.ap_array});

    if (const auto g = root["ue_grid"])
    {
        cfg.ue_grid.resolution = get(g, "resolution", cfg.ue_grid.resolution);
        cfg.ue_grid.height = get(g, "height", cfg.ue_grid.height);
        if (g["margin"])
            cfg.ue_grid.margin = get(g, "margin", 0.0);
    }

    if (const auto t = root["tracing"])
    {
        cfg.budget.max_reflections = get(t, "max_reflections", cfg.budget.max_reflections);
        cfg.budget.max_diffractions = get(t, "max_diffractions", cfg.budget.max_diffractions);
        cfg.budget.max_path_loss_db = get(t, "max_path_loss_db", cfg.budget.max_path_loss_db);
        if (cfg.budget.max_reflections < 0 || cfg.budget.max_diffractions < 0)
            fail(t, "interaction budget must be >= 0");
    }

    if (const auto x = root["xpr"])
    {
        cfg.calibrate_xpr = get(x, "calibrate", cfg.calibrate_xpr);
        cfg.xpr.factor = get(x, "factor", cfg.xpr.factor);
        cfg.xpr.offset = get(x, "offset_db", cfg.xpr.offset);
        cfg.xpr.target_mean_los_db = get(x, "mean_los_db", cfg.xpr.target_mean_los_db);
        cfg.xpr.target_mean_nlos_db = get(x, "mean_nlos_db", cfg.xpr.target_mean_nlos_db);
        cfg.xpr.target_std_db = get(x, "std_db", cfg.xpr.target_std_db);
        if (!(cfg.xpr.target_std_db > 0))
            fail(x, "xpr std_db must be > 0");
    }

    if (const auto p = root["power"])
    {
        auto &w = cfg.power;
        w.per_ap_dbm = get(p, "per_ap_dbm", w.per_ap_dbm);
        w.network_dbm = get(p, "network_dbm", w.network_dbm);
        w.dl_total_dbm = get(p, "dl_total_dbm", w.dl_total_dbm);
        w.ul_per_antenna_dbm = get(p, "ul_per_antenna_dbm", w.ul_per_antenna_dbm);
        w.noise_dbm_per_rb = get(p, "noise_dbm_per_rb", w.noise_dbm_per_rb);
        w.detection_threshold_dbm = get(p, "detection_threshold_dbm", w.detection_threshold_dbm);
        w.rank_per_antenna_dbm = get(p, "rank_per_antenna_dbm", w.rank_per_antenna_dbm);
        w.rank_threshold_dbm_per_rb = get(p, "rank_threshold_dbm_per_rb", w.rank_threshold_dbm_per_rb);
        w.spread_over_rbs = get(p, "spread_over_rbs", w.spread_over_rbs);
    }
    cfg.coherence_threshold = get(root, "coherence_threshold", cfg.coherence_threshold);
    if (!(cfg.coherence_threshold > 0 && cfg.coherence_threshold < 1))
        throw ConfigError("coherence_threshold must be in (0, 1)");

    if (const auto deps = root["deployments"])
    {
        if (!deps.IsMap())
            fail(deps, "deployments must be a map of name -> AP id list");
        for (const auto &kv : deps)
        {
            std::vector<int> ids;
            try
            {
                ids = kv.second.as<std::vector<int>>();
            }
            catch (const YAML::Exception &)
            {
                fail(kv.second, "deployment must be a list of AP ids");
            }
            cfg.deployments.emplace_back(kv.first.as<std::string>(), std::move(ids));
        }
    }

    // Validate every named deployment against the scene up front.
    validate_deployment(cfg.scene, cfg.deployment());
    for (const auto &d : cfg.deployments)
        validate_deployment(cfg.scene, cfg.deployment(d.first));

    cfg.scenario = read_scenario(root["scenario"]);
    resolve_scenario(cfg, cfg.scenario);
    return cfg;
}

} // namespace

std::string ScenarioConfig::canonical() const
{
    std::ostringstream os;
    os << "deployment=" << deployment << ";tx=" << tx_model_name(tx_model) << ";channel=" << channel_model_name(channel)
       << ";link=" << link_name(link) << ";precoder=" << precoder_name(precoder) << ";layers=" << layers << ";coop=";
    if (coop)
        os << coop->first << "," << coop->second;
    else
        os << "none";
    os << ";seed=" << seed;
    return os.str();
}

std::vector<int> SimulationConfig::all_ap_ids() const
{
    std::vector<int> ids;
    for (const auto &a : aps)
        ids.push_back(a.id);
    return ids;
}

const std::vector<int> &SimulationConfig::deployment_ids(const std::string &name) const
{
    for (const auto &d : deployments)
        if (d.first == name)
            return d.second;
    throw ConfigError("unknown deployment '" + name + "'");
}

std::vector<Site> SimulationConfig::ue_sites() const
{
    const auto points = place_ue_grid(scene, ue_grid.resolution, ue_grid.height, ue_grid.margin);
    std::vector<Site> ues;
    ues.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        ues.push_back(Site{static_cast<int>(i), points[i], ue_array});
    return ues;
}

Deployment SimulationConfig::deployment(const std::string &name) const
{
    Deployment d;
    d.aps = aps;
    d.ues = ue_sites();
    d.active_ap_ids = name.empty() ? all_ap_ids() : deployment_ids(name);
    return d;
}

TxPowerKind parse_tx_model(const std::string &s)
{
    if (s == "per-ap")
        return TxPowerKind::ConstantPerAp;
    if (s == "network")
        return TxPowerKind::ConstantNetwork;
    throw ConfigError("tx model must be per-ap or network, got '" + s + "'");
}

ChannelModel parse_channel_model(const std::string &s)
{
    if (s == "rt")
        return ChannelModel::RayTracing;
    if (s == "rayleigh")
        return ChannelModel::Rayleigh;
    throw ConfigError("channel must be rt or rayleigh, got '" + s + "'");
}

LinkDirection parse_link(const std::string &s)
{
    if (s == "dl")
        return LinkDirection::Downlink;
    if (s == "ul")
        return LinkDirection::Uplink;
    throw ConfigError("link must be dl or ul, got '" + s + "'");
}

Precoder parse_precoder(const std::string &s)
{
    if (s == "zf")
        return Precoder::ZeroForcing;
    if (s == "svd")
        return Precoder::Svd;
    throw ConfigError("precoder must be zf or svd, got '" + s + "'");
}

const char *tx_model_name(TxPowerKind k)
{
    return k == TxPowerKind::ConstantPerAp ? "per-ap" : "network";
}

const char *link_name(LinkDirection l)
{
    return l == LinkDirection::Downlink ? "dl" : "ul";
}

ResolvedScenario resolve_scenario(const SimulationConfig &cfg, const ScenarioConfig &sc)
{
    ResolvedScenario r;
    r.deployment = sc.deployment;
    r.candidates = sc.deployment.empty() ? cfg.all_ap_ids() : cfg.deployment_ids(sc.deployment);
    if (r.candidates.empty())
        throw ConfigError("deployment '" + sc.deployment + "' has no APs");
    const int a = static_cast<int>(r.candidates.size());
    r.active = a;
    if (sc.coop)
    {
        const auto [ca, cb] = *sc.coop;
        if (ca < 1 || cb < 1)
            throw ConfigError("coop values must be >= 1");
        if (cb > ca)
            throw ConfigError("coop (" + std::to_string(ca) + "," + std::to_string(cb) + "): b must not exceed a");
        if (ca != a)
            throw ConfigError("coop a=" + std::to_string(ca) + " does not match deployment size " + std::to_string(a));
        r.active = cb;
    }
    const int max_layers = static_cast<int>(std::min(cfg.ue_array.element_count(), cfg.ap_array.element_count() * r.active));
    if (sc.layers < 1 || sc.layers > max_layers)
        throw ConfigError("layers must be in [1, " + std::to_string(max_layers) + "]");
    return r;
}

SimulationConfig parse_config(const std::string &yaml_text, const std::string &source_path)
{
    YAML::Node root;
    try
    {
        root = YAML::Load(yaml_text);
    }
    catch (const YAML::Exception &e)
    {
        throw ConfigError(source_path + ": " + e.what());
    }
    try
    {
        return build(root, yaml_text, source_path);
    }
    catch (const YAML::Exception &e)
    {
        throw ConfigError(source_path + ": " + e.what());
    }
}

SimulationConfig load_config(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

} // namespace dmimo
