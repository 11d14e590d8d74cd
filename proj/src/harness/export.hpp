// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

// Result files. All CSVs use '\n' line ends and %.10g numbers; -inf dB
// values are written as the -400 dB floor.
//
//   metrics.csv       ue_id,x,y,best_ap,rsrp_best_dbm,los_count,detected_count,
//                     rel2_db,rel3_db,rank,cap_dl_zf,cap_dl_svd,cap_ul
//   dist_<metric>.csv value,cdf,ccdf (one row per distinct value)
//   capacity_map.csv  x_m,y_m,bits_per_s_per_hz
//   manifest.json     config echo, scenario, digests of config/scene/DB/files
//   coherence.csv     ap_id,ue_id,coherence_hz,pathloss_db (trace only)

#include "harness/scenario.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dmimo
{

std::string format_number(double v);
std::string hex_digest(std::uint64_t v);

void write_metrics_csv(std::ostream &out, const std::vector<UeRow> &rows);
void write_distribution_csv(std::ostream &out, const DistributionTable &table);
void write_capacity_map_csv(std::ostream &out, const std::vector<CapacityCell> &cells);
void write_coherence_csv(std::ostream &out, const std::vector<CoherenceRow> &rows);

// Writes every result file into dir (created if missing). Throws EmptyInput
// before touching the directory when there are no UE rows, IoError on
// write failures.
void export_results(const ScenarioResult &result, const SimulationConfig &cfg, const std::filesystem::path &dir);

// Digest of a file's bytes, as recorded in the manifest.
std::uint64_t file_digest(const std::filesystem::path &path);

void write_text_file(const std::filesystem::path &path, const std::string &content);

// Reads metrics.csv rows back (columns by header name).
std::vector<UeRow> read_metrics_csv(const std::filesystem::path &path);

struct ReportLine
{
    std::string metric;
    std::size_t count = 0;
    double mean = 0, p10 = 0, median = 0, p90 = 0;
};

// Summary statistics per metric over existing rows.
std::vector<ReportLine> report(const std::vector<UeRow> &rows);
void write_report(std::ostream &out, const std::vector<ReportLine> &lines);

} // namespace dmimo
