// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

// Exercises the library only through its public C header.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <dmimo/dmimo.h>

#include <cstdio>
#include <filesystem>
#include <string>

namespace fs = std::filesystem;

namespace
{

const std::string small = std::string(DMIMO_TEST_DATA_DIR) + "/small.yaml";

fs::path scratch(const std::string &name)
{
    auto p = fs::temp_directory_path() / ("dmimo_capi_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("status names and version")
{
    CHECK(std::string(dmimo_version()).size() > 0);
    CHECK(std::string(dmimo_status_name(DMIMO_OK)) == "ok");
    CHECK(std::string(dmimo_status_name(DMIMO_ERR_OVERLAP)).size() > 0);
    CHECK(std::string(dmimo_status_name(static_cast<dmimo_status>(99))).size() > 0);
}

TEST_CASE("NULL arguments and load failures")
{
    dmimo_config *cfg = nullptr;
    CHECK(dmimo_config_load(nullptr, &cfg) == DMIMO_ERR_INVALID_ARGUMENT);
    CHECK(dmimo_config_load(small.c_str(), nullptr) == DMIMO_ERR_INVALID_ARGUMENT);
    CHECK(dmimo_config_load("/nonexistent.yaml", &cfg) == DMIMO_ERR_CONFIG);
    CHECK(cfg == nullptr);
    CHECK(std::string(dmimo_last_error()).find("nonexistent") != std::string::npos);
    const std::string overlap = std::string(DMIMO_TEST_DATA_DIR) + "/overlap.yaml";
    CHECK(dmimo_config_load(overlap.c_str(), &cfg) == DMIMO_ERR_OVERLAP);
    CHECK(dmimo_trace(nullptr, 1, nullptr) == DMIMO_ERR_INVALID_ARGUMENT);
    CHECK(dmimo_eval(nullptr, nullptr, nullptr, nullptr) == DMIMO_ERR_INVALID_ARGUMENT);
    CHECK(dmimo_report(nullptr, nullptr) == DMIMO_ERR_INVALID_ARGUMENT);
    CHECK(dmimo_report("/nonexistent/metrics.csv", nullptr) == DMIMO_ERR_IO);
    dmimo_config_free(nullptr);
    dmimo_db_free(nullptr);
    dmimo_result_free(nullptr);
}

TEST_CASE("full pipeline through the C API")
{
    dmimo_config *cfg = nullptr;
    REQUIRE(dmimo_config_load(small.c_str(), &cfg) == DMIMO_OK);
    CHECK(dmimo_config_seed(cfg) == 7);
    CHECK(dmimo_config_scene_digest(cfg) != 0);
    CHECK(std::string(dmimo_config_summary(cfg)).size() > 0);

    dmimo_channel_db *db = nullptr;
    REQUIRE(dmimo_trace(cfg, 7, &db) == DMIMO_OK);
    CHECK(dmimo_db_seed(db) == 7);
    CHECK(dmimo_db_scene_digest(db) == dmimo_config_scene_digest(cfg));

    const auto dir = scratch("pipeline");
    const std::string db_path = (dir / "rt.dmch").string();
    REQUIRE(dmimo_db_save(db, db_path.c_str()) == DMIMO_OK);
    dmimo_channel_db *loaded = nullptr;
    REQUIRE(dmimo_db_load(cfg, db_path.c_str(), &loaded) == DMIMO_OK);
    // Trace statistics are not stored in the file; the digests must agree.
    const auto digests = [](const char *s) {
        const std::string t(s);
        return t.substr(t.find("scene digest"));
    };
    CHECK(digests(dmimo_db_summary(loaded)) == digests(dmimo_db_summary(db)));
    CHECK(dmimo_db_write_coherence(loaded, 0.9, (dir / "coherence.csv").string().c_str()) == DMIMO_OK);
    CHECK(dmimo_dump_link_paths(cfg, loaded, 1, 0, 7, (dir / "paths.txt").string().c_str()) == DMIMO_OK);
    CHECK(dmimo_dump_link_paths(cfg, loaded, 42, 0, 7, (dir / "paths.txt").string().c_str()) != DMIMO_OK);

    dmimo_channel_db *ray = nullptr;
    REQUIRE(dmimo_db_synthesize_rayleigh(db, 3, &ray) == DMIMO_OK);

    dmimo_scenario_options opt;
    dmimo_scenario_options_init(&opt);
    dmimo_result *res = nullptr;
    REQUIRE(dmimo_eval(cfg, loaded, &opt, &res) == DMIMO_OK);
    const size_t n = dmimo_result_ue_count(res);
    CHECK(n > 0);
    double median = 0, p0 = 0, p1 = 0;
    CHECK(dmimo_result_percentile(res, "cap_dl_svd", 0.5, &median) == DMIMO_OK);
    CHECK(dmimo_result_percentile(res, "cap_dl_svd", 0.0, &p0) == DMIMO_OK);
    CHECK(dmimo_result_percentile(res, "cap_dl_svd", 1.0, &p1) == DMIMO_OK);
    CHECK(p0 <= median);
    CHECK(median <= p1);
    CHECK(dmimo_result_percentile(res, "no_such_metric", 0.5, &median) == DMIMO_ERR_INVALID_ARGUMENT);

    dmimo_result *refused = res;
    CHECK(dmimo_eval(cfg, ray, &opt, &refused) == DMIMO_ERR_CONFIG);
    CHECK(refused == nullptr);

    const auto out = dir / "run";
    REQUIRE(dmimo_result_export(res, cfg, out.string().c_str()) == DMIMO_OK);
    CHECK(fs::exists(out / "metrics.csv"));
    CHECK(fs::exists(out / "manifest.json"));
    CHECK(dmimo_report((out / "metrics.csv").string().c_str(), (dir / "report.csv").string().c_str()) == DMIMO_OK);
    CHECK(fs::file_size(dir / "report.csv") > 0);

    // Scenario overrides and their validation.
    dmimo_result *ul = nullptr;
    opt.link = "ul";
    opt.channel = "rayleigh";
    opt.coop_a = 3;
    opt.coop_b = 2;
    opt.layers = 2;
    CHECK(dmimo_eval(cfg, loaded, &opt, &ul) == DMIMO_OK);
    CHECK(dmimo_result_ue_count(ul) == n);
    dmimo_result_free(ul);
    ul = nullptr;
    opt.coop_b = 4;
    CHECK(dmimo_eval(cfg, loaded, &opt, &ul) == DMIMO_ERR_CONFIG);
    CHECK(ul == nullptr);
    opt.coop_b = 2;
    opt.precoder = "mmse";
    CHECK(dmimo_eval(cfg, loaded, &opt, &ul) == DMIMO_ERR_CONFIG);

    // A truncated database file is a format error.
    fs::resize_file(db_path, 64);
    dmimo_channel_db *bad = nullptr;
    CHECK(dmimo_db_load(cfg, db_path.c_str(), &bad) == DMIMO_ERR_FORMAT);
    CHECK(bad == nullptr);

    dmimo_result_free(res);
    dmimo_db_free(ray);
    dmimo_db_free(loaded);
    dmimo_db_free(db);
    dmimo_config_free(cfg);
}
