/* SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.
 */

/* dmimo: indoor distributed-MIMO coverage and capacity simulator, C API.
 *
 * All handles are opaque and owned by the caller once returned; free them
 * with the matching *_free function (NULL is accepted). Functions returning a
 * handle through an out pointer set it to NULL on failure. Every function that
 * can fail returns a dmimo_status; the message of the last failure on the
 * calling thread is available from dmimo_last_error(). Returned strings are
 * owned by the library and stay valid until the owning handle is freed.
 */
#ifndef DMIMO_DMIMO_H
#define DMIMO_DMIMO_H

#include <stddef.h>
#include <stdint.h>

#if defined(DMIMO_BUILDING_LIBRARY)
#define DMIMO_API __attribute__((visibility("default")))
#else
#define DMIMO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dmimo_status
{
    DMIMO_OK = 0,
    DMIMO_ERR_INVALID_ARGUMENT = 1, /* NULL handle, bad option string */
    DMIMO_ERR_CONFIG = 2,           /* invalid configuration or scenario */
    DMIMO_ERR_OVERLAP = 3,          /* obstacle/site placement conflict */
    DMIMO_ERR_FORMAT = 4,           /* malformed database or CSV */
    DMIMO_ERR_DIGEST_MISMATCH = 5,  /* database built for another scene */
    DMIMO_ERR_IO = 6,
    DMIMO_ERR_NUMERIC = 7,          /* SVD non-convergence, singular or degenerate channel */
    DMIMO_ERR_EMPTY_INPUT = 8,
    DMIMO_ERR_MISSING_ENTRY = 9,
    DMIMO_ERR_INTERNAL = 10
} dmimo_status;

typedef struct dmimo_config dmimo_config;
typedef struct dmimo_channel_db dmimo_channel_db;
typedef struct dmimo_result dmimo_result;

DMIMO_API const char *dmimo_version(void);
DMIMO_API const char *dmimo_status_name(dmimo_status status);
DMIMO_API const char *dmimo_last_error(void);

/* ---- Configuration ---- */

DMIMO_API dmimo_status dmimo_config_load(const char *path, dmimo_config **out);
DMIMO_API void dmimo_config_free(dmimo_config *config);
/* Multi-line human-readable description of scene and deployment. */
DMIMO_API const char *dmimo_config_summary(const dmimo_config *config);
DMIMO_API uint64_t dmimo_config_seed(const dmimo_config *config);
DMIMO_API uint64_t dmimo_config_scene_digest(const dmimo_config *config);

/* Scenario overrides. NULL strings and zero numbers keep the value from the
 * configuration file. */
typedef struct dmimo_scenario_options
{
    const char *deployment; /* deployment name */
    const char *tx_model;   /* "per-ap" | "network" */
    const char *channel;    /* "rt" | "rayleigh" */
    const char *link;       /* "dl" | "ul" */
    const char *precoder;   /* "zf" | "svd" */
    int layers;
    int coop_a; /* cooperation (a, b): b APs active among a; both or neither */
    int coop_b;
    int has_seed;
    uint64_t seed;
} dmimo_scenario_options;

DMIMO_API void dmimo_scenario_options_init(dmimo_scenario_options *options);

/* ---- Channel databases ---- */

/* Ray-traces every AP x UE link of the configuration. */
DMIMO_API dmimo_status dmimo_trace(const dmimo_config *config, uint64_t seed, dmimo_channel_db **out);
DMIMO_API dmimo_status dmimo_db_save(const dmimo_channel_db *db, const char *path);
/* With a configuration, the database must match its scene digest. */
DMIMO_API dmimo_status dmimo_db_load(const dmimo_config *config, const char *path, dmimo_channel_db **out);
DMIMO_API dmimo_status dmimo_db_synthesize_rayleigh(const dmimo_channel_db *rt, uint64_t seed,
                                                    dmimo_channel_db **out);
/* CSV: ap_id,ue_id,coherence_hz,pathloss_db. */
DMIMO_API dmimo_status dmimo_db_write_coherence(const dmimo_channel_db *db, double threshold, const char *path);
DMIMO_API const char *dmimo_db_summary(const dmimo_channel_db *db);
DMIMO_API uint64_t dmimo_db_seed(const dmimo_channel_db *db);
DMIMO_API uint64_t dmimo_db_scene_digest(const dmimo_channel_db *db);
DMIMO_API void dmimo_db_free(dmimo_channel_db *db);

/* Writes the traced paths of one link (columnar text). The XPR correction
 * fitted for db is used when db is given, the configured one otherwise. */
DMIMO_API dmimo_status dmimo_dump_link_paths(const dmimo_config *config, const dmimo_channel_db *db, int ap_id,
                                             int ue_id, uint64_t seed, const char *path);

/* ---- Scenario evaluation ---- */

DMIMO_API dmimo_status dmimo_eval(const dmimo_config *config, const dmimo_channel_db *rt_db,
                                  const dmimo_scenario_options *options, dmimo_result **out);
DMIMO_API dmimo_status dmimo_result_export(const dmimo_result *result, const dmimo_config *config, const char *dir);
DMIMO_API const char *dmimo_result_summary(const dmimo_result *result);
DMIMO_API size_t dmimo_result_ue_count(const dmimo_result *result);
/* Percentile p in [0, 1] of a per-UE metric (metrics.csv column name). */
DMIMO_API dmimo_status dmimo_result_percentile(const dmimo_result *result, const char *metric, double p,
                                               double *out);
DMIMO_API void dmimo_result_free(dmimo_result *result);

/* Summary statistics (metric,count,mean,p10,median,p90) of an existing
 * metrics.csv, written to output_path or standard output when NULL. */
DMIMO_API dmimo_status dmimo_report(const char *metrics_csv, const char *output_path);

#ifdef __cplusplus
}
#endif

#endif
