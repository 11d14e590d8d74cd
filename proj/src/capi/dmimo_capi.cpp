// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#include "dmimo/dmimo.h"

#include "common/error.hpp"
#include "harness/config.hpp"
#include "harness/export.hpp"
#include "harness/scenario.hpp"

#include <fstream>
#include <memory>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace dmimo;

struct dmimo_config
{
    SimulationConfig cfg;
    std::string summary;
};

struct dmimo_channel_db
{
    ChannelDatabase db;
    std::optional<CalibrationResult> calibration;
    std::size_t path_count = 0;
    std::string summary;
};

struct dmimo_result
{
    ScenarioResult result;
    std::string summary;
};

namespace
{

thread_local std::string last_error;

dmimo_status status_of(ErrorKind k)
{
    switch (k)
    {
    case ErrorKind::Config: return DMIMO_ERR_CONFIG;
    case ErrorKind::Overlap: return DMIMO_ERR_OVERLAP;
    case ErrorKind::Format: return DMIMO_ERR_FORMAT;
    case ErrorKind::DigestMismatch: return DMIMO_ERR_DIGEST_MISMATCH;
    case ErrorKind::Io: return DMIMO_ERR_IO;
    case ErrorKind::Convergence:
    case ErrorKind::SingularChannel:
    case ErrorKind::SingularGram:
    case ErrorKind::DegenerateChannel: return DMIMO_ERR_NUMERIC;
    case ErrorKind::EmptyInput: return DMIMO_ERR_EMPTY_INPUT;
    case ErrorKind::MissingEntry: return DMIMO_ERR_MISSING_ENTRY;
    }
    return DMIMO_ERR_INTERNAL;
}

template <typename F>
dmimo_status guarded(F &&f)
{
    try
    {
        f();
        last_error.clear();
        return DMIMO_OK;
    }
    catch (const Error &e)
    {
        last_error = std::string(error_kind_name(e.kind())) + ": " + e.what();
        return status_of(e.kind());
    }
    catch (const std::bad_alloc &)
    {
        last_error = "out of memory";
        return DMIMO_ERR_INTERNAL;
    }
    catch (const std::exception &e)
    {
        last_error = e.what();
        return DMIMO_ERR_INTERNAL;
    }
}

dmimo_status invalid(const char *what)
{
    last_error = std::string("invalid argument: ") + what;
    return DMIMO_ERR_INVALID_ARGUMENT;
}

std::string config_summary(const SimulationConfig &cfg)
{
    const Scene &s = cfg.scene;
    const auto &b = s.bounds();
    const auto ues = cfg.ue_sites();
    std::ostringstream os;
    os << "scene " << format_number(b.max.x() - b.min.x()) << " x " << format_number(b.max.y() - b.min.y())
       << " x " << format_number(b.max.z() - b.min.z()) << " m, " << s.obstacles().size() << " obstacles, "
       << s.facets().size() << " facets, " << s.edges().size() << " edges\n";
    os << "radio " << format_number(s.radio().carrier_frequency) << " Hz, " << s.radio().rb_count << " RBs\n";
    os << "aps " << cfg.aps.size() << ", ues " << ues.size() << "\n";
    for (const auto &[name, ids] : cfg.deployments)
    {
        os << "deployment " << name << ":";
        for (int id : ids)
            os << ' ' << id;
        os << "\n";
    }
    os << "scene digest " << hex_digest(s.digest()) << "\n";
    return os.str();
}

std::string db_summary(const dmimo_channel_db &h)
{
    const auto &db = h.db;
    std::size_t empty = 0;
    for (const auto &[k, l] : db.entries)
        empty += l.empty ? 1 : 0;
    std::ostringstream os;
    os << "model " << channel_model_name(db.model) << ", seed " << db.seed << ", " << db.ap_ids.size() << " APs x "
       << db.ue_ids.size() << " UEs, " << db.rb_center_frequencies.size() << " RBs, " << db.ap_antennas << "x"
       << db.ue_antennas << " antennas, " << empty << " empty links\n";
    if (h.path_count)
        os << "paths " << h.path_count << "\n";
    if (h.calibration)
    {
        const auto &c = *h.calibration;
        os << "xpr factor " << format_number(c.calibration.factor) << ", offset "
           << format_number(c.calibration.offset) << " dB, ray mean " << format_number(c.stats.mean_db)
           << " dB, std " << format_number(c.stats.std_db) << " dB over " << c.stats.rays << " rays\n";
    }
    os << "scene digest " << hex_digest(db.scene_digest) << ", database digest " << hex_digest(database_digest(db))
       << "\n";
    return os.str();
}

std::string result_summary(const ScenarioResult &r)
{
    std::ostringstream os;
    os << "scenario " << r.scenario.canonical() << "\n";
    os << "ues " << r.rows.size() << "\n";
    for (const auto &[name, t] : r.distributions)
        os << name << " median " << format_number(t.median()) << " mean " << format_number(t.mean()) << "\n";
    return os.str();
}

} // namespace

extern "C" {

const char *dmimo_version(void)
{
    return "0.1.0";
}

const char *dmimo_status_name(dmimo_status s)
{
    switch (s)
    {
    case DMIMO_OK: return "ok";
    case DMIMO_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DMIMO_ERR_CONFIG: return "config error";
    case DMIMO_ERR_OVERLAP: return "overlap error";
    case DMIMO_ERR_FORMAT: return "format error";
    case DMIMO_ERR_DIGEST_MISMATCH: return "digest mismatch";
    case DMIMO_ERR_IO: return "io error";
    case DMIMO_ERR_NUMERIC: return "numeric error";
    case DMIMO_ERR_EMPTY_INPUT: return "empty input";
    case DMIMO_ERR_MISSING_ENTRY: return "missing entry";
    case DMIMO_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char *dmimo_last_error(void)
{
    return last_error.c_str();
}

dmimo_status dmimo_config_load(const char *path, dmimo_config **out)
{
    if (!path || !out)
        return invalid("path and out are required");
    *out = nullptr;
    return guarded([&] {
        auto h = std::make_unique<dmimo_config>();
        h->cfg = load_config(path);
        h->summary = config_summary(h->cfg);
        *out = h.release();
    });
}

void dmimo_config_free(dmimo_config *config)
{
    delete config;
}

const char *dmimo_config_summary(const dmimo_config *config)
{
    return config ? config->summary.c_str() : "";
}

uint64_t dmimo_config_seed(const dmimo_config *config)
{
    return config ? config->cfg.scenario.seed : 0;
}

uint64_t dmimo_config_scene_digest(const dmimo_config *config)
{
    return config ? config->cfg.scene.digest() : 0;
}

void dmimo_scenario_options_init(dmimo_scenario_options *o)
{
    if (o)
        *o = dmimo_scenario_options{};
}

dmimo_status dmimo_trace(const dmimo_config *config, uint64_t seed, dmimo_channel_db **out)
{
    if (!config || !out)
        return invalid("config and out are required");
    *out = nullptr;
    return guarded([&] {
        auto t = build_channel_database(config->cfg, seed);
        auto h = std::make_unique<dmimo_channel_db>();
        h->db = std::move(t.database);
        if (t.calibrated)
            h->calibration = t.calibration;
        h->path_count = t.path_count;
        h->summary = db_summary(*h);
        *out = h.release();
    });
}

dmimo_status dmimo_db_save(const dmimo_channel_db *db, const char *path)
{
    if (!db || !path)
        return invalid("db and path are required");
    return guarded([&] { save_database(db->db, path); });
}

dmimo_status dmimo_db_load(const dmimo_config *config, const char *path, dmimo_channel_db **out)
{
    if (!path || !out)
        return invalid("path and out are required");
    *out = nullptr;
    return guarded([&] {
        auto h = std::make_unique<dmimo_channel_db>();
        std::optional<std::uint64_t> digest;
        if (config)
            digest = config->cfg.scene.digest();
        h->db = load_database(path, digest);
        h->summary = db_summary(*h);
        *out = h.release();
    });
}

dmimo_status dmimo_db_synthesize_rayleigh(const dmimo_channel_db *rt, uint64_t seed, dmimo_channel_db **out)
{
    if (!rt || !out)
        return invalid("rt and out are required");
    *out = nullptr;
    return guarded([&] {
        auto h = std::make_unique<dmimo_channel_db>();
        h->db = synthesize_rayleigh_database(rt->db, seed);
        h->summary = db_summary(*h);
        *out = h.release();
    });
}

dmimo_status dmimo_db_write_coherence(const dmimo_channel_db *db, double threshold, const char *path)
{
    if (!db || !path)
        return invalid("db and path are required");
    return guarded([&] {
        std::ostringstream os;
        write_coherence_csv(os, coherence_table(db->db, threshold));
        write_text_file(path, os.str());
    });
}

const char *dmimo_db_summary(const dmimo_channel_db *db)
{
    return db ? db->summary.c_str() : "";
}

uint64_t dmimo_db_seed(const dmimo_channel_db *db)
{
    return db ? db->db.seed : 0;
}

uint64_t dmimo_db_scene_digest(const dmimo_channel_db *db)
{
    return db ? db->db.scene_digest : 0;
}

void dmimo_db_free(dmimo_channel_db *db)
{
    delete db;
}

dmimo_status dmimo_dump_link_paths(const dmimo_config *config, const dmimo_channel_db *db, int ap_id, int ue_id,
                                   uint64_t seed, const char *path)
{
    if (!config || !path)
        return invalid("config and path are required");
    return guarded([&] {
        const auto &cfg = config->cfg;
        const auto dep = cfg.deployment();
        XprCalibration cal = cfg.xpr;
        if (db && db->calibration)
            cal = db->calibration->calibration;
        const auto paths = trace_link(cfg.scene, dep.ap(ap_id).position, dep.ue(ue_id).position, cfg.budget, cal,
                                      LinkStream{seed, ap_id, ue_id});
        std::ostringstream os;
        write_path_dump(os, paths);
        write_text_file(path, os.str());
    });
}

dmimo_status dmimo_eval(const dmimo_config *config, const dmimo_channel_db *rt_db,
                        const dmimo_scenario_options *options, dmimo_result **out)
{
    if (!config || !rt_db || !out)
        return invalid("config, rt_db and out are required");
    *out = nullptr;
    return guarded([&] {
        ScenarioConfig sc = config->cfg.scenario;
        if (options)
        {
            if (options->deployment)
                sc.deployment = options->deployment;
            if (options->tx_model)
                sc.tx_model = parse_tx_model(options->tx_model);
            if (options->channel)
                sc.channel = parse_channel_model(options->channel);
            if (options->link)
                sc.link = parse_link(options->link);
            if (options->precoder)
                sc.precoder = parse_precoder(options->precoder);
            if (options->layers)
                sc.layers = options->layers;
            if (options->coop_a || options->coop_b)
                sc.coop = std::make_pair(options->coop_a, options->coop_b);
            if (options->has_seed)
                sc.seed = options->seed;
        }
        auto h = std::make_unique<dmimo_result>();
        h->result = run_scenario(config->cfg, sc, rt_db->db);
        h->summary = result_summary(h->result);
        *out = h.release();
    });
}

dmimo_status dmimo_result_export(const dmimo_result *result, const dmimo_config *config, const char *dir)
{
    if (!result || !config || !dir)
        return invalid("result, config and dir are required");
    return guarded([&] { export_results(result->result, config->cfg, dir); });
}

const char *dmimo_result_summary(const dmimo_result *result)
{
    return result ? result->summary.c_str() : "";
}

size_t dmimo_result_ue_count(const dmimo_result *result)
{
    return result ? result->result.rows.size() : 0;
}

dmimo_status dmimo_result_percentile(const dmimo_result *result, const char *metric, double p, double *out)
{
    if (!result || !metric || !out)
        return invalid("result, metric and out are required");
    if (!(p >= 0.0 && p <= 1.0))
        return invalid("percentile must be in [0, 1]");
    for (const auto &[name, t] : result->result.distributions)
        if (name == metric)
        {
            *out = t.percentile(p);
            return DMIMO_OK;
        }
    return invalid("unknown metric");
}

void dmimo_result_free(dmimo_result *result)
{
    delete result;
}

dmimo_status dmimo_report(const char *metrics_csv, const char *output_path)
{
    if (!metrics_csv)
        return invalid("metrics_csv is required");
    return guarded([&] {
        const auto lines = report(read_metrics_csv(metrics_csv));
        std::ostringstream os;
        write_report(os, lines);
        if (output_path)
            write_text_file(output_path, os.str());
        else
            std::cout << os.str() << std::flush;
    });
}

} // extern "C"
