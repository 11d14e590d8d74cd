// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#include "harness/export.hpp"

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/units.hpp"

#include "json.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace dmimo
{

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        v = v > 0 ? -power_floor_dbm : power_floor_dbm;
    if (v == 0.0)
        v = 0.0; // drop negative zero
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string hex_digest(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

void write_metrics_csv(std::ostream &out, const std::vector<UeRow> &rows)
{
    out << "ue_id,x,y,best_ap,rsrp_best_dbm,los_count,detected_count,rel2_db,rel3_db,rank,cap_dl_zf,cap_dl_svd,"
           "cap_ul\n";
    for (const auto &r : rows)
    {
        out << r.ue_id << ',' << format_number(r.x) << ',' << format_number(r.y) << ',' << r.best_ap << ','
            << format_number(floor_dbm(r.rsrp_best_dbm)) << ',' << r.los_count << ',' << r.detected_count << ','
            << format_number(floor_dbm(r.rel2_db)) << ',' << format_number(floor_dbm(r.rel3_db)) << ',' << r.rank
            << ',' << format_number(r.cap_dl_zf) << ',' << format_number(r.cap_dl_svd) << ','
            << format_number(r.cap_ul) << '\n';
    }
}

void write_distribution_csv(std::ostream &out, const DistributionTable &table)
{
    out << "value,cdf,ccdf\n";
    const auto &v = table.sorted();
    const double n = static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        if (i + 1 < v.size() && v[i + 1] == v[i])
            continue;
        const double cdf = static_cast<double>(i + 1) / n;
        out << format_number(v[i]) << ',' << format_number(cdf) << ',' << format_number(1.0 - cdf) << '\n';
    }
}

void write_capacity_map_csv(std::ostream &out, const std::vector<CapacityCell> &cells)
{
    out << "x_m,y_m,bits_per_s_per_hz\n";
    for (const auto &c : cells)
        out << format_number(c.x) << ',' << format_number(c.y) << ',' << format_number(c.bits_per_s_per_hz) << '\n';
}

void write_coherence_csv(std::ostream &out, const std::vector<CoherenceRow> &rows)
{
    out << "ap_id,ue_id,coherence_hz,pathloss_db\n";
    for (const auto &r : rows)
        out << r.ap_id << ',' << r.ue_id << ',' << format_number(r.coherence_hz) << ','
            << format_number(r.pathloss_db) << '\n';
}

void write_text_file(const std::filesystem::path &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.close();
    if (!out)
        throw IoError("failed writing '" + path.string() + "'");
}

std::uint64_t file_digest(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a(ss.str());
}

void export_results(const ScenarioResult &result, const SimulationConfig &cfg, const std::filesystem::path &dir)
{
    if (result.rows.empty())
        throw EmptyInput("no UE rows to export");

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create '" + dir.string() + "': " + ec.message());

    // name -> content, written in this order
    std::vector<std::pair<std::string, std::string>> files;
    {
        std::ostringstream os;
        write_metrics_csv(os, result.rows);
        files.emplace_back("metrics.csv", os.str());
    }
    for (const auto &[name, table] : result.distributions)
    {
        std::ostringstream os;
        write_distribution_csv(os, table);
        files.emplace_back("dist_" + name + ".csv", os.str());
    }
    {
        std::ostringstream os;
        write_capacity_map_csv(os, result.capacity_map);
        files.emplace_back("capacity_map.csv", os.str());
    }

    nlohmann::ordered_json m;
    m["format"] = "dmimo-run/1";
    m["config_path"] = cfg.source_path;
    m["config_digest"] = hex_digest(result.config_digest);
    m["scene_digest"] = hex_digest(result.scene_digest);
    m["database_digest"] = hex_digest(result.database_digest);
    const auto &sc = result.scenario;
    m["scenario"] = {{"deployment", sc.deployment},
                     {"tx_model", tx_model_name(sc.tx_model)},
                     {"channel", channel_model_name(sc.channel)},
                     {"link", link_name(sc.link)},
                     {"precoder", precoder_name(sc.precoder)},
                     {"layers", sc.layers},
                     {"seed", sc.seed},
                     {"candidate_aps", result.resolved.candidates},
                     {"active_aps", result.resolved.active}};
    if (sc.coop)
        m["scenario"]["coop"] = {sc.coop->first, sc.coop->second};
    m["ue_count"] = result.rows.size();
    nlohmann::ordered_json digests = nlohmann::ordered_json::object();
    for (const auto &[name, content] : files)
        digests[name] = hex_digest(fnv1a(content));
    m["files"] = digests;
    m["config"] = cfg.source_text;

    for (const auto &[name, content] : files)
        write_text_file(dir / name, content);
    write_text_file(dir / "manifest.json", m.dump(2) + "\n");
}

namespace
{

std::vector<std::string> split(const std::string &line, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep))
        out.push_back(cur);
    if (!line.empty() && line.back() == sep)
        out.emplace_back();
    return out;
}

double to_double(const std::string &s, std::size_t line)
{
    try
    {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    }
    catch (const std::exception &)
    {
        throw FormatError("metrics.csv line " + std::to_string(line) + ": bad number '" + s + "'");
    }
}

} // namespace

std::vector<UeRow> read_metrics_csv(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line))
        throw FormatError("'" + path.string() + "' is empty");
    const auto header = split(line, ',');
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i)
        col[header[i]] = i;
    static const char *required[] = {"ue_id",   "x",    "y",         "best_ap",    "rsrp_best_dbm",
                                     "los_count", "detected_count", "rel2_db", "rel3_db", "rank",
                                     "cap_dl_zf", "cap_dl_svd", "cap_ul"};
    for (const char *r : required)
        if (!col.count(r))
            throw FormatError("'" + path.string() + "' lacks column " + r);

    std::vector<UeRow> rows;
    std::size_t n = 1;
    while (std::getline(in, line))
    {
        ++n;
        if (line.empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != header.size())
            throw FormatError("metrics.csv line " + std::to_string(n) + ": wrong field count");
        auto get = [&](const char *name) { return to_double(f[col.at(name)], n); };
        UeRow r;
        r.ue_id = static_cast<int>(get("ue_id"));
        r.x = get("x");
        r.y = get("y");
        r.best_ap = static_cast<int>(get("best_ap"));
        r.rsrp_best_dbm = get("rsrp_best_dbm");
        r.los_count = static_cast<int>(get("los_count"));
        r.detected_count = static_cast<int>(get("detected_count"));
        r.rel2_db = get("rel2_db");
        r.rel3_db = get("rel3_db");
        r.rank = static_cast<int>(get("rank"));
        r.cap_dl_zf = get("cap_dl_zf");
        r.cap_dl_svd = get("cap_dl_svd");
        r.cap_ul = get("cap_ul");
        rows.push_back(r);
    }
    return rows;
}

std::vector<ReportLine> report(const std::vector<UeRow> &rows)
{
    if (rows.empty())
        throw EmptyInput("no metric rows to report");
    std::vector<ReportLine> out;
    for (const auto &m : distribution_metrics())
    {
        std::vector<double> v;
        for (const auto &r : rows)
            v.push_back(metric_value(r, m));
        const auto t = aggregate(v);
        out.push_back(ReportLine{m, t.size(), t.mean(), t.percentile(0.1), t.median(), t.percentile(0.9)});
    }
    return out;
}

void write_report(std::ostream &out, const std::vector<ReportLine> &lines)
{
    out << "metric,count,mean,p10,median,p90\n";
    for (const auto &l : lines)
        out << l.metric << ',' << l.count << ',' << format_number(l.mean) << ',' << format_number(l.p10) << ','
            << format_number(l.median) << ',' << format_number(l.p90) << '\n';
}

} // namespace dmimo
