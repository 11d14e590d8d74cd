// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

// Simulation configuration loaded from a YAML file (schema in README).
// Lengths in metres, frequencies in Hz, powers in dBm.

#include "chanmodel/channel.hpp"
#include "mimo/mimo.hpp"
#include "scene/scene.hpp"
#include "tracer/tracer.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dmimo
{

enum class LinkDirection
{
    Downlink,
    Uplink
};

struct UeGridConfig
{
    double resolution = 2.0;
    double height = 1.5;
    std::optional<double> margin; // default resolution / 2
};

struct PowerConfig
{
    double per_ap_dbm = 23.0;              // ConstantPerAp level
    double network_dbm = 27.8;             // ConstantNetwork level
    double dl_total_dbm = 23.0;            // DL network sum power
    double ul_per_antenna_dbm = 17.0;      // UE power per antenna
    double noise_dbm_per_rb = -118.0;
    double detection_threshold_dbm = -100.0;
    double rank_per_antenna_dbm = 17.0;    // uniform AP allocation for stream rank
    double rank_threshold_dbm_per_rb = -100.0;
    // Spread per-antenna powers evenly over the RB grid before per-RB
    // comparisons (UL SINR and stream rank).
    bool spread_over_rbs = true;
};

struct ScenarioConfig
{
    std::string deployment;
    TxPowerKind tx_model = TxPowerKind::ConstantPerAp;
    ChannelModel channel = ChannelModel::RayTracing;
    LinkDirection link = LinkDirection::Downlink;
    Precoder precoder = Precoder::Svd;
    int layers = 4;
    std::optional<std::pair<int, int>> coop; // (a, b): b active among a
    std::uint64_t seed = 1;

    // Canonical one-line description, also hashed into digests.
    std::string canonical() const;
};

struct SimulationConfig
{
    std::string source_path;
    std::string source_text;
    SceneDescription scene_description;
    Scene scene;
    ArrayConfig ap_array;
    ArrayConfig ue_array;
    std::vector<Site> aps;
    UeGridConfig ue_grid;
    TraceBudget budget;
    XprCalibration xpr;
    bool calibrate_xpr = true;
    PowerConfig power;
    double coherence_threshold = 0.9;
    std::vector<std::pair<std::string, std::vector<int>>> deployments;
    ScenarioConfig scenario;

    // All APs plus the UE grid; active set = named deployment (all APs when
    // the name is empty).
    Deployment deployment(const std::string &name = {}) const;
    const std::vector<int> &deployment_ids(const std::string &name) const;
    std::vector<int> all_ap_ids() const;
    std::vector<Site> ue_sites() const;
};

// Throws ConfigError (and OverlapError from scene validation).
SimulationConfig load_config(const std::string &path);
SimulationConfig parse_config(const std::string &yaml_text, const std::string &source_path = "<memory>");

TxPowerKind parse_tx_model(const std::string &s);
ChannelModel parse_channel_model(const std::string &s);
LinkDirection parse_link(const std::string &s);
Precoder parse_precoder(const std::string &s);
const char *tx_model_name(TxPowerKind k);
const char *link_name(LinkDirection l);

// Resolves deployment/coop into (candidate APs, active count b) and checks
// every invariant. Throws ConfigError.
struct ResolvedScenario
{
    std::string deployment;
    std::vector<int> candidates;
    int active = 0;
};
ResolvedScenario resolve_scenario(const SimulationConfig &cfg, const ScenarioConfig &sc);

} // namespace dmimo
