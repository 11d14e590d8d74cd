// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

// End-to-end orchestration: channel database construction and per-UE
// scenario evaluation.

#include "chanmodel/database.hpp"
#include "harness/config.hpp"
#include "metrics/metrics.hpp"
#include "tracer/calibration.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dmimo
{

struct CoherenceRow
{
    int ap_id = 0;
    int ue_id = 0;
    double coherence_hz = 0.0;
    double pathloss_db = 0.0; // -10 log10 of mean |H|^2
};

struct TraceOutput
{
    ChannelDatabase database;
    CalibrationResult calibration;
    bool calibrated = false;
    std::size_t path_count = 0;
};

// Coherence bandwidth and path loss of every non-empty link, (ap, ue) order.
std::vector<CoherenceRow> coherence_table(const ChannelDatabase &db, double threshold);

// Traces every AP x UE link of the configuration. With xpr.calibrate set,
// the XPR correction is fitted over all traced rays before polarization is
// applied. Deterministic in (config, seed) regardless of worker count.
TraceOutput build_channel_database(const SimulationConfig &cfg, std::uint64_t seed);

struct UeRow
{
    int ue_id = 0;
    double x = 0.0;
    double y = 0.0;
    int best_ap = -1;
    double rsrp_best_dbm = 0.0;
    int los_count = 0;
    int detected_count = 0;
    double rel2_db = 0.0;
    double rel3_db = 0.0;
    int rank = 0;
    double cap_dl_zf = 0.0;
    double cap_dl_svd = 0.0;
    double cap_ul = 0.0;
    std::vector<int> selected_aps;
    int singular_rbs = 0;
};

struct CapacityCell
{
    double x = 0.0;
    double y = 0.0;
    double bits_per_s_per_hz = 0.0;
};

struct ScenarioResult
{
    std::uint64_t config_digest = 0;
    std::uint64_t scene_digest = 0;
    std::uint64_t database_digest = 0;
    ScenarioConfig scenario;
    ResolvedScenario resolved;
    std::vector<UeRow> rows; // sorted by ue_id
    std::vector<std::pair<std::string, DistributionTable>> distributions;
    std::vector<CapacityCell> capacity_map;
};

// Names and order of the per-UE metrics that get a distribution table.
const std::vector<std::string> &distribution_metrics();
double metric_value(const UeRow &row, const std::string &metric);

std::uint64_t config_digest(const SimulationConfig &cfg, const ScenarioConfig &sc);
std::uint64_t database_digest(const ChannelDatabase &db);

// Evaluates the scenario on a ray-traced channel database. Errors carry the
// failing UE/AP in their message.
ScenarioResult run_scenario(const SimulationConfig &cfg, const ScenarioConfig &sc, const ChannelDatabase &rt_db);

} // namespace dmimo
